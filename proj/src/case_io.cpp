#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "islanding/grid_model.hpp"

namespace islanding {

namespace {

enum class Section { None, Meta, Bus, Branch, Dg };

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_double(std::string_view tok, std::size_t line, const char* field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("invalid ") + field + " '" +
                               std::string(tok) + "'");
  return value;
}

int to_int(std::string_view tok, std::size_t line, const char* field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("invalid ") + field + " '" +
                               std::string(tok) + "'");
  return value;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct MetaFields {
  std::optional<double> base_kv;
  std::optional<int> slack;
  VoltageLimits limits;
};

void parse_meta(const std::vector<std::string_view>& toks, std::size_t line,
                MetaFields& meta) {
  for (auto tok : toks) {
    auto eq = tok.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line, "expected key=value in [meta], got '" +
                                 std::string(tok) + "'");
    auto key = tok.substr(0, eq);
    auto val = tok.substr(eq + 1);
    if (key == "base_kv")
      meta.base_kv = to_double(val, line, "base_kv");
    else if (key == "slack")
      meta.slack = to_int(val, line, "slack");
    else if (key == "umin")
      meta.limits.min = to_double(val, line, "umin");
    else if (key == "umax")
      meta.limits.max = to_double(val, line, "umax");
    else
      throw ParseError(line, "unknown [meta] key '" + std::string(key) + "'");
  }
}

}  // namespace

Network parse_case(const std::string& text) {
  MetaFields meta;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<DistributedGenerator> dgs;
  Section section = Section::None;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      auto close = line.find(']');
      if (close == std::string_view::npos)
        throw ParseError(line_no, "unterminated section header");
      auto name = line.substr(1, close - 1);
      if (name == "meta")
        section = Section::Meta;
      else if (name == "bus")
        section = Section::Bus;
      else if (name == "branch")
        section = Section::Branch;
      else if (name == "dg")
        section = Section::Dg;
      else
        throw ParseError(line_no, "unknown section [" + std::string(name) + "]");
      line = trim(line.substr(close + 1));
      if (line.empty()) continue;
      // Only [meta] may carry data on its header line.
      if (section != Section::Meta)
        throw ParseError(line_no, "unexpected data after section header");
    }

    auto toks = split(line);
    switch (section) {
      case Section::None:
        throw ParseError(line_no, "data before first section header");
      case Section::Meta:
        parse_meta(toks, line_no, meta);
        break;
      case Section::Bus: {
        if (toks.size() != 5)
          throw ParseError(line_no,
                           "[bus] expects: id p_kw q_kvar priority controllable");
        Bus b;
        b.id = to_int(toks[0], line_no, "bus id");
        b.load_active = to_double(toks[1], line_no, "p_kw");
        b.load_reactive = to_double(toks[2], line_no, "q_kvar");
        const int prio = to_int(toks[3], line_no, "priority");
        if (prio < 1 || prio > 3)
          throw ParseError(line_no, "priority must be 1, 2 or 3");
        b.priority = static_cast<Priority>(prio);
        b.controllable_fraction = to_double(toks[4], line_no, "controllable");
        buses.push_back(b);
        break;
      }
      case Section::Branch: {
        if (toks.size() != 4 && toks.size() != 5)
          throw ParseError(line_no,
                           "[branch] expects: from to r_ohm x_ohm [i_rated_a]");
        Branch br;
        br.from = to_int(toks[0], line_no, "from");
        br.to = to_int(toks[1], line_no, "to");
        br.resistance = to_double(toks[2], line_no, "r_ohm");
        br.reactance = to_double(toks[3], line_no, "x_ohm");
        if (toks.size() == 5)
          br.rated_current = to_double(toks[4], line_no, "i_rated_a");
        branches.push_back(br);
        break;
      }
      case Section::Dg: {
        if (toks.size() != 5)
          throw ParseError(
              line_no, "[dg] expects: name bus rated_kw predicted_kw sigma_kw");
        DistributedGenerator dg;
        dg.id = std::string(toks[0]);
        dg.bus = to_int(toks[1], line_no, "dg bus");
        dg.rated_capacity = to_double(toks[2], line_no, "rated_kw");
        dg.predicted_output = to_double(toks[3], line_no, "predicted_kw");
        dg.sigma = to_double(toks[4], line_no, "sigma_kw");
        dgs.push_back(std::move(dg));
        break;
      }
    }
  }

  if (!meta.base_kv) throw ParseError(line_no, "[meta] is missing base_kv");
  if (!meta.slack) throw ParseError(line_no, "[meta] is missing slack");

  std::stable_sort(buses.begin(), buses.end(),
                   [](const Bus& a, const Bus& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < buses.size(); ++i) {
    if (buses[i].id == buses[i - 1].id)
      throw ValidationError("bus " + std::to_string(buses[i].id) +
                            ": duplicate id");
  }

  return Network(std::move(buses), std::move(branches), std::move(dgs),
                 *meta.slack, *meta.base_kv, meta.limits);
}

Network load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open case file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_case(buf.str());
}

std::string write_case(const Network& net) {
  std::ostringstream out;
  out << "[meta]\n"
      << "base_kv=" << fmt(net.base_kv()) << " slack=" << net.slack_bus()
      << " umin=" << fmt(net.voltage_limits().min)
      << " umax=" << fmt(net.voltage_limits().max) << "\n\n[bus]\n";
  for (const Bus& b : net.buses()) {
    out << b.id << ' ' << fmt(b.load_active) << ' ' << fmt(b.load_reactive)
        << ' ' << static_cast<int>(b.priority) << ' '
        << fmt(b.controllable_fraction) << '\n';
  }
  out << "\n[branch]\n";
  for (const Branch& br : net.branches()) {
    out << br.from << ' ' << br.to << ' ' << fmt(br.resistance) << ' '
        << fmt(br.reactance);
    if (br.rated_current) out << ' ' << fmt(*br.rated_current);
    out << '\n';
  }
  out << "\n[dg]\n";
  for (const auto& dg : net.dgs()) {
    out << dg.id << ' ' << dg.bus << ' ' << fmt(dg.rated_capacity) << ' '
        << fmt(dg.predicted_output) << ' ' << fmt(dg.sigma) << '\n';
  }
  return out.str();
}

BranchKey parse_branch_key(const std::string& text) {
  auto dash = text.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == text.size())
    throw std::invalid_argument("branch must be written A-B, got '" + text +
                                "'");
  auto num = [&](std::string_view tok) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw std::invalid_argument("branch must be written A-B, got '" + text +
                                  "'");
    return v;
  };
  std::string_view sv = text;
  return BranchKey{num(sv.substr(0, dash)), num(sv.substr(dash + 1))};
}

}  // namespace islanding
