#include "ltlfsynth/explicit_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

constexpr double kExactTolerance = 1e-12;

bool implicit_valuations(const Mdp& m) { return m.variables.empty(); }

[[noreturn]] void fail(std::string_view file, std::size_t line, const std::string& message) {
  throw ModelError(std::string(file) + " line " + std::to_string(line) + ": " + message);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Non-empty lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++no;
    std::string_view line = text.substr(pos, end - pos);
    if (!split_ws(line).empty()) out.emplace_back(no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

template <typename T>
T parse_uint(std::string_view tok, std::string_view file, std::size_t line, const char* what) {
  T v{};
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    fail(file, line, std::string("expected ") + what + ", found '" + std::string(tok) + "'");
  }
  return v;
}

double parse_prob(std::string_view tok, std::size_t line) {
  double v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    fail(".tra", line, "expected a probability, found '" + std::string(tok) + "'");
  }
  if (!(v > 0.0 && v <= 1.0)) fail(".tra", line, "probability " + std::string(tok) + " is outside (0, 1]");
  return v;
}

}  // namespace

ExplicitFiles export_explicit(const Mdp& m) {
  ExplicitFiles f;
  {
    std::string& out = f.tra;
    out += std::to_string(m.num_states()) + " " + std::to_string(m.num_choices()) + " " +
           std::to_string(m.num_transitions()) + "\n";
    for (StateId s = 0; s < m.num_states(); ++s) {
      for (std::size_t c = 0; c < m.choices[s].size(); ++c) {
        const Choice& ch = m.choices[s][c];
        for (const auto& t : ch.transitions) {
          out += std::to_string(s) + " " + std::to_string(c) + " " + std::to_string(t.target) + " " +
                 format_double(t.probability) + " " + m.actions[ch.action] + "\n";
        }
      }
    }
  }
  {
    std::string& out = f.sta;
    if (implicit_valuations(m)) {
      out += "(s)\n";
      for (StateId s = 0; s < m.num_states(); ++s) out += std::to_string(s) + ":(" + std::to_string(s) + ")\n";
    } else {
      out += "(";
      for (std::size_t i = 0; i < m.variables.size(); ++i) out += (i ? "," : "") + m.variables[i];
      out += ")\n";
      for (StateId s = 0; s < m.num_states(); ++s) {
        out += std::to_string(s) + ":(";
        for (std::size_t i = 0; i < m.valuations[s].size(); ++i) {
          out += (i ? "," : "") + std::to_string(m.valuations[s][i]);
        }
        out += ")\n";
      }
    }
  }
  {
    std::string& out = f.lab;
    out += "0=\"init\"";
    for (std::size_t i = 0; i < m.ap.size(); ++i) out += " " + std::to_string(i + 1) + "=\"" + m.ap[i] + "\"";
    out += "\n";
    for (StateId s = 0; s < m.num_states(); ++s) {
      if (s != m.initial && m.labels[s].empty()) continue;
      out += std::to_string(s) + ":";
      if (s == m.initial) out += " 0";
      for (auto p : m.labels[s]) out += " " + std::to_string(p + 1);
      out += "\n";
    }
  }
  return f;
}

Mdp import_explicit(std::string_view tra, std::string_view sta, std::string_view lab) {
  Mdp m;

  // .tra
  auto tra_lines = lines_of(tra);
  if (tra_lines.empty()) throw ModelError(".tra: file is empty");
  std::size_t n = 0, declared_choices = 0, declared_transitions = 0;
  {
    auto [no, line] = tra_lines.front();
    auto tok = split_ws(line);
    if (tok.size() != 3) fail(".tra", no, "header must be 'states choices transitions'");
    n = parse_uint<std::size_t>(tok[0], ".tra", no, "a state count");
    declared_choices = parse_uint<std::size_t>(tok[1], ".tra", no, "a choice count");
    declared_transitions = parse_uint<std::size_t>(tok[2], ".tra", no, "a transition count");
    if (n == 0) fail(".tra", no, "model has no states");
  }
  struct RawChoice {
    std::optional<std::string> action;
    std::vector<Transition> transitions;
    std::size_t first_line = 0;
  };
  std::vector<std::map<std::size_t, RawChoice>> raw(n);
  for (std::size_t i = 1; i < tra_lines.size(); ++i) {
    auto [no, line] = tra_lines[i];
    auto tok = split_ws(line);
    if (tok.size() != 4 && tok.size() != 5) fail(".tra", no, "expected 'src choice dst prob [action]'");
    auto src = parse_uint<std::size_t>(tok[0], ".tra", no, "a source state");
    auto choice = parse_uint<std::size_t>(tok[1], ".tra", no, "a choice index");
    auto dst = parse_uint<std::size_t>(tok[2], ".tra", no, "a target state");
    double p = parse_prob(tok[3], no);
    if (src >= n) fail(".tra", no, "state " + std::to_string(src) + " does not exist (model has " + std::to_string(n) + ")");
    if (dst >= n) fail(".tra", no, "state " + std::to_string(dst) + " does not exist (model has " + std::to_string(n) + ")");
    RawChoice& rc = raw[src][choice];
    if (rc.transitions.empty()) {
      rc.first_line = no;
      if (tok.size() == 5) rc.action = std::string(tok[4]);
    } else if ((tok.size() == 5 ? std::optional<std::string>(std::string(tok[4])) : std::nullopt) != rc.action) {
      fail(".tra", no, "choice " + std::to_string(choice) + " of state " + std::to_string(src) +
                           " has inconsistent action names");
    }
    for (const auto& t : rc.transitions) {
      if (t.target == dst) fail(".tra", no, "duplicate successor " + std::to_string(dst));
    }
    rc.transitions.push_back({static_cast<StateId>(dst), p});
  }
  m.choices.resize(n);
  std::size_t transitions = 0, choices = 0;
  for (StateId s = 0; s < n; ++s) {
    if (raw[s].empty()) throw ModelError(".tra: state " + std::to_string(s) + " has no choices");
    std::size_t expect = 0;
    for (auto& [idx, rc] : raw[s]) {
      if (idx != expect++) {
        fail(".tra", rc.first_line, "choice indices of state " + std::to_string(s) + " are not contiguous from 0");
      }
      std::string name = rc.action.value_or("_c" + std::to_string(idx));
      auto a = m.find_action(name);
      if (!a) {
        a = static_cast<ActionId>(m.actions.size());
        m.actions.push_back(name);
      }
      for (const auto& c : m.choices[s]) {
        if (c.action == *a) fail(".tra", rc.first_line, "action '" + name + "' appears twice in state " + std::to_string(s));
      }
      double sum = 0.0;
      for (const auto& t : rc.transitions) sum += t.probability;
      double dev = std::abs(sum - 1.0);
      if (dev > kStochasticTolerance) {
        fail(".tra", rc.first_line, "distribution of state " + std::to_string(s) + " choice " + std::to_string(idx) +
                                        " sums to " + format_double(sum));
      }
      if (dev > kExactTolerance) {
        for (auto& t : rc.transitions) t.probability /= sum;
      }
      transitions += rc.transitions.size();
      ++choices;
      m.choices[s].push_back(Choice{*a, std::move(rc.transitions)});
    }
  }
  if (choices != declared_choices) {
    throw ModelError(".tra: header declares " + std::to_string(declared_choices) + " choices, found " +
                     std::to_string(choices));
  }
  if (transitions != declared_transitions) {
    throw ModelError(".tra: header declares " + std::to_string(declared_transitions) + " transitions, found " +
                     std::to_string(transitions));
  }

  // .lab
  m.labels.assign(n, {});
  auto lab_lines = lines_of(lab);
  std::optional<StateId> initial;
  if (!lab_lines.empty()) {
    auto [no, header] = lab_lines.front();
    std::map<std::size_t, std::string> decl;
    for (auto tok : split_ws(header)) {
      auto eq = tok.find('=');
      if (eq == std::string_view::npos || tok.size() < eq + 3 || tok[eq + 1] != '"' || tok.back() != '"') {
        fail(".lab", no, "expected id=\"name\", found '" + std::string(tok) + "'");
      }
      auto id = parse_uint<std::size_t>(tok.substr(0, eq), ".lab", no, "a label id");
      std::string name(tok.substr(eq + 2, tok.size() - eq - 3));
      if (!decl.emplace(id, name).second) fail(".lab", no, "label id " + std::to_string(id) + " declared twice");
    }
    std::map<std::size_t, std::optional<PropId>> prop_of;  // nullopt: init/deadlock
    std::optional<std::size_t> init_id;
    for (const auto& [id, name] : decl) {
      if (name == "init") {
        init_id = id;
        prop_of[id] = std::nullopt;
      } else if (name == "deadlock") {
        prop_of[id] = std::nullopt;
      } else {
        if (!is_identifier(name)) fail(".lab", no, "invalid proposition name '" + name + "'");
        prop_of[id] = static_cast<PropId>(m.ap.size());
        m.ap.push_back(name);
      }
    }
    for (std::size_t i = 1; i < lab_lines.size(); ++i) {
      auto [lno, line] = lab_lines[i];
      auto colon = line.find(':');
      if (colon == std::string_view::npos) fail(".lab", lno, "expected 'state: ids'");
      auto head = split_ws(line.substr(0, colon));
      if (head.size() != 1) fail(".lab", lno, "expected 'state: ids'");
      auto s = parse_uint<std::size_t>(head[0], ".lab", lno, "a state id");
      if (s >= n) fail(".lab", lno, "state " + std::to_string(s) + " does not exist (model has " + std::to_string(n) + ")");
      for (auto tok : split_ws(line.substr(colon + 1))) {
        auto id = parse_uint<std::size_t>(tok, ".lab", lno, "a label id");
        auto it = prop_of.find(id);
        if (it == prop_of.end()) fail(".lab", lno, "label id " + std::to_string(id) + " is not declared");
        if (init_id && id == *init_id) {
          if (initial && *initial != s) fail(".lab", lno, "more than one initial state");
          initial = static_cast<StateId>(s);
        } else if (it->second) {
          m.labels[s].push_back(*it->second);
        }
      }
      std::sort(m.labels[s].begin(), m.labels[s].end());
      m.labels[s].erase(std::unique(m.labels[s].begin(), m.labels[s].end()), m.labels[s].end());
    }
  }
  m.initial = initial.value_or(0);

  // .sta
  auto sta_lines = lines_of(sta);
  if (!sta_lines.empty()) {
    auto [no, header] = sta_lines.front();
    std::string h;
    for (char c : header) {
      if (c != ' ' && c != '\t' && c != '\r') h += c;
    }
    if (h.size() < 2 || h.front() != '(' || h.back() != ')') fail(".sta", no, "header must be '(var,...)'");
    std::vector<std::string> vars;
    std::stringstream ss(h.substr(1, h.size() - 2));
    for (std::string v; std::getline(ss, v, ',');) vars.push_back(v);
    std::vector<std::vector<std::int64_t>> vals(n);
    std::vector<bool> seen(n, false);
    for (std::size_t i = 1; i < sta_lines.size(); ++i) {
      auto [lno, line] = sta_lines[i];
      std::string l;
      for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') l += c;
      }
      auto colon = l.find(':');
      if (colon == std::string::npos || l.size() < colon + 3 || l[colon + 1] != '(' || l.back() != ')') {
        fail(".sta", lno, "expected 'id:(values)'");
      }
      auto s = parse_uint<std::size_t>(std::string_view(l).substr(0, colon), ".sta", lno, "a state id");
      if (s >= n) fail(".sta", lno, "state " + std::to_string(s) + " does not exist (model has " + std::to_string(n) + ")");
      if (seen[s]) fail(".sta", lno, "state " + std::to_string(s) + " listed twice");
      seen[s] = true;
      std::stringstream vs(l.substr(colon + 2, l.size() - colon - 3));
      for (std::string v; std::getline(vs, v, ',');) {
        if (v == "true") {
          vals[s].push_back(1);
        } else if (v == "false") {
          vals[s].push_back(0);
        } else {
          std::int64_t x = 0;
          auto res = std::from_chars(v.data(), v.data() + v.size(), x);
          if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(".sta", lno, "bad value '" + v + "'");
          vals[s].push_back(x);
        }
      }
      if (vals[s].size() != vars.size()) fail(".sta", lno, "expected " + std::to_string(vars.size()) + " values");
    }
    for (StateId s = 0; s < n; ++s) {
      if (!seen[s]) throw ModelError(".sta: state " + std::to_string(s) + " has no valuation");
    }
    bool implicit = vars.size() == 1 && vars[0] == "s";
    for (StateId s = 0; implicit && s < n; ++s) implicit = vals[s][0] == static_cast<std::int64_t>(s);
    if (!implicit) {
      m.variables = std::move(vars);
      m.valuations = std::move(vals);
    }
  }

  auto violations = validate(m);
  if (!violations.empty()) throw ModelError("invalid model: " + violations.front().message);
  return m;
}

namespace {

std::string slurp(const std::string& path, bool required) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (required) throw ModelError("cannot open " + path);
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write " + path);
  out << text;
}

}  // namespace

void write_explicit(const Mdp& m, const std::string& prefix) {
  auto f = export_explicit(m);
  spit(prefix + ".tra", f.tra);
  spit(prefix + ".sta", f.sta);
  spit(prefix + ".lab", f.lab);
}

Mdp read_explicit(const std::string& prefix) {
  auto tra = slurp(prefix + ".tra", true);
  auto sta = slurp(prefix + ".sta", false);
  auto lab = slurp(prefix + ".lab", true);
  return import_explicit(tra, sta, lab);
}

}  // namespace ltlfsynth
