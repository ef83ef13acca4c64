#include "rawset/history.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace rawset {

namespace {

const char* kind_name(OpKind k) {
  switch (k) {
    case OpKind::Add: return "add";
    case OpKind::Remove: return "remove";
    case OpKind::RemoveWins: return "removewins";
  }
  return "?";
}

}  // namespace

bool member(const History& h, Element e) {
  // An element is present when (i) some add of it was never followed by a
  // remove, and (ii) every removeWins of it was cancelled by an add issued
  // causally after that removeWins. A removeWins that no add has cancelled
  // keeps the element out of the set no matter how many adds are live —
  // that is what lets it win against adds concurrent with it.
  bool some_add_survives = false;
  for (const Event& a : h.events) {
    if (a.op != OpKind::Add || a.e != e) continue;
    bool alive = true;
    for (const Event& r : h.events) {
      if (r.op == OpKind::Remove && r.e == e && happens_before(a.clock, r.clock)) {
        alive = false;
        break;
      }
    }
    if (alive) {
      some_add_survives = true;
      break;
    }
  }
  if (!some_add_survives) return false;

  for (const Event& w : h.events) {
    if (w.op != OpKind::RemoveWins || w.e != e) continue;
    bool cancelled = false;
    for (const Event& a : h.events) {
      if (a.op == OpKind::Add && a.e == e && happens_before(w.clock, a.clock)) {
        cancelled = true;
        break;
      }
    }
    if (!cancelled) return false;
  }
  return true;
}

std::vector<Element> contents(const History& h) {
  std::unordered_set<Element> added;
  for (const Event& ev : h.events)
    if (ev.op == OpKind::Add) added.insert(ev.e);
  std::vector<Element> out;
  for (Element e : added)
    if (member(h, e)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_text(const History& h) {
  std::ostringstream os;
  for (const Event& ev : h.events) {
    os << kind_name(ev.op) << ' ' << ev.e << ' ' << ev.origin << ' ';
    const auto& c = ev.clock.entries();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) os << ',';
      os << c[i];
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("history line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

History history_from_text(std::string_view text) {
  History h;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ' ') {
        if (i > start) fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 4)
      throw std::runtime_error("history line " + std::to_string(line_no) + ": expected 4 fields");

    Event ev;
    if (fields[0] == "add") ev.op = OpKind::Add;
    else if (fields[0] == "remove") ev.op = OpKind::Remove;
    else if (fields[0] == "removewins") ev.op = OpKind::RemoveWins;
    else throw std::runtime_error("history line " + std::to_string(line_no) + ": unknown kind '" + std::string(fields[0]) + "'");

    ev.e = parse_u64(fields[1], line_no);
    ev.origin = static_cast<ReplicaId>(parse_u64(fields[2], line_no));

    std::vector<std::uint64_t> entries;
    std::string_view cs = fields[3];
    std::size_t cpos = 0;
    while (cpos <= cs.size()) {
      std::size_t comma = cs.find(',', cpos);
      std::string_view part = cs.substr(cpos, comma == std::string_view::npos ? std::string_view::npos : comma - cpos);
      entries.push_back(parse_u64(part, line_no));
      if (comma == std::string_view::npos) break;
      cpos = comma + 1;
    }
    ev.clock = VectorClock(entries.size());
    ev.clock.entries() = entries;
    h.events.push_back(std::move(ev));
  }
  return h;
}

}  // namespace rawset
