#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mci/common.hpp"
#include "mci/graph.hpp"
#include "mci/imset.hpp"
#include "mci/vertexset.hpp"
#include "json.hpp"

namespace mci {

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << content;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

inline ValidationError at_line(int line, const std::string& msg) {
  return ValidationError("line " + std::to_string(line) + ": " + msg);
}

inline double parse_number(const std::string& tok, int line) {
  const std::string t = trim(tok);
  if (t.empty()) throw at_line(line, "empty numeric field");
  char* end = nullptr;
  double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw at_line(line, "malformed number '" + t + "'");
  return x;
}

}  // namespace detail

// Line-oriented graph text: a `vertices:` header, then `a -> b` and
// `a <-> b` edge lines, an optional `order:` line, and `#` comments.
inline Admg parse_graph_text(const std::string& text) {
  std::vector<std::string> lines = detail::split_lines(text);
  Admg g(0);
  bool haveVertices = false;
  std::vector<Vertex> order;
  int orderLine = 0;

  for (int li = 1; li <= static_cast<int>(lines.size()); ++li) {
    std::string raw = lines[li - 1];
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    std::vector<std::string> toks = detail::split_ws(line);

    if (toks[0] == "vertices:") {
      if (haveVertices) throw detail::at_line(li, "duplicate vertices: header");
      std::vector<std::string> names(toks.begin() + 1, toks.end());
      for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
          if (names[i] == names[j])
            throw detail::at_line(li, "duplicate vertex '" + names[i] + "'");
      try {
        g = Admg(names);
      } catch (const ValidationError& e) {
        throw detail::at_line(li, e.what());
      }
      haveVertices = true;
      continue;
    }
    if (!haveVertices) throw detail::at_line(li, "expected vertices: header first");

    if (toks[0] == "order:") {
      if (!order.empty() || orderLine != 0)
        throw detail::at_line(li, "duplicate order: line");
      orderLine = li;
      VSet seen = 0;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        Vertex v = g.index_of(toks[i]);
        if (v < 0) throw detail::at_line(li, "unknown vertex '" + toks[i] + "'");
        if (contains(seen, v))
          throw detail::at_line(li, "duplicate vertex '" + toks[i] + "' in order");
        seen |= bit(v);
        order.push_back(v);
      }
      if (static_cast<int>(order.size()) != g.p())
        throw detail::at_line(li, "order must list every vertex");
      continue;
    }

    if (toks.size() != 3 || (toks[1] != "->" && toks[1] != "<->"))
      throw detail::at_line(li, "malformed line '" + line + "'");
    Vertex a = g.index_of(toks[0]);
    Vertex b = g.index_of(toks[2]);
    if (a < 0) throw detail::at_line(li, "unknown vertex '" + toks[0] + "'");
    if (b < 0) throw detail::at_line(li, "unknown vertex '" + toks[2] + "'");
    try {
      if (toks[1] == "->")
        g.add_directed(a, b);
      else
        g.add_bidirected(a, b);
    } catch (const ValidationError& e) {
      throw detail::at_line(li, e.what());
    }
    if (toks[1] == "->" && !g.directed_acyclic())
      throw detail::at_line(li, "directed cycle closed by '" + line + "'");
  }

  if (!haveVertices) throw ValidationError("line 1: expected vertices: header first");
  if (orderLine != 0) {
    g.declared_order = order;
    if (!order_consistent(g, TotalOrder(order)))
      throw detail::at_line(orderLine, "order is not consistent with the directed edges");
  }
  return g;
}

inline std::string serialize_graph_text(const Admg& g) {
  std::ostringstream out;
  out << "vertices:";
  for (const std::string& n : g.names) out << ' ' << n;
  out << '\n';
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b : vertices(g.ch_[a])) out << g.names[a] << " -> " << g.names[b] << '\n';
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b : vertices(g.sib_[a]))
      if (b > a) out << g.names[a] << " <-> " << g.names[b] << '\n';
  if (!g.declared_order.empty()) {
    out << "order:";
    for (Vertex v : g.declared_order) out << ' ' << g.names[v];
    out << '\n';
  }
  return out.str();
}

// JSON mirror: {"vertices": [...], "directed": [[a,b],...],
// "bidirected": [[a,b],...], "order": [...]}.
inline Admg parse_graph_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw ValidationError("graph JSON requires a 'vertices' array");
  std::vector<std::string> names;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) throw ValidationError("vertex names must be strings");
    names.push_back(v.get<std::string>());
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t k = i + 1; k < names.size(); ++k)
      if (names[i] == names[k]) throw ValidationError("duplicate vertex '" + names[i] + "'");
  Admg g(names);

  auto edge_pairs = [&](const char* field) {
    std::vector<std::pair<Vertex, Vertex>> out;
    if (!j.contains(field)) return out;
    if (!j[field].is_array())
      throw ValidationError(std::string("graph JSON field '") + field + "' must be an array");
    for (const auto& e : j[field]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw ValidationError(std::string("entries of '") + field +
                              "' must be two-element name arrays");
      Vertex a = g.index_of(e[0].get<std::string>());
      Vertex b = g.index_of(e[1].get<std::string>());
      if (a < 0) throw ValidationError("unknown vertex '" + e[0].get<std::string>() + "'");
      if (b < 0) throw ValidationError("unknown vertex '" + e[1].get<std::string>() + "'");
      out.push_back({a, b});
    }
    return out;
  };

  for (auto [a, b] : edge_pairs("directed")) {
    g.add_directed(a, b);
    if (!g.directed_acyclic())
      throw ValidationError("directed cycle closed by edge " + g.names[a] + " -> " + g.names[b]);
  }
  for (auto [a, b] : edge_pairs("bidirected")) g.add_bidirected(a, b);

  if (j.contains("order")) {
    if (!j["order"].is_array()) throw ValidationError("graph JSON field 'order' must be an array");
    VSet seen = 0;
    for (const auto& v : j["order"]) {
      if (!v.is_string()) throw ValidationError("order entries must be vertex names");
      Vertex idx = g.index_of(v.get<std::string>());
      if (idx < 0) throw ValidationError("unknown vertex '" + v.get<std::string>() + "'");
      if (contains(seen, idx))
        throw ValidationError("duplicate vertex '" + v.get<std::string>() + "' in order");
      seen |= bit(idx);
      g.declared_order.push_back(idx);
    }
    if (static_cast<int>(g.declared_order.size()) != g.p())
      throw ValidationError("order must list every vertex");
    if (!order_consistent(g, TotalOrder(g.declared_order)))
      throw ValidationError("order is not consistent with the directed edges");
  }
  return g;
}

inline std::string serialize_graph_json(const Admg& g) {
  nlohmann::json j;
  j["vertices"] = g.names;
  nlohmann::json dir = nlohmann::json::array();
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b : vertices(g.ch_[a]))
      dir.push_back(nlohmann::json::array({g.names[a], g.names[b]}));
  nlohmann::json bid = nlohmann::json::array();
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b : vertices(g.sib_[a]))
      if (b > a) bid.push_back(nlohmann::json::array({g.names[a], g.names[b]}));
  j["directed"] = dir;
  j["bidirected"] = bid;
  if (!g.declared_order.empty()) {
    nlohmann::json ord = nlohmann::json::array();
    for (Vertex v : g.declared_order) ord.push_back(g.names[v]);
    j["order"] = ord;
  }
  return j.dump(2) + "\n";
}

// Accepts either format; JSON inputs start with '{'.
inline Admg parse_graph(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    if (c == '{') return parse_graph_json(text);
    break;
  }
  return parse_graph_text(text);
}

inline Admg load_graph(const std::string& path) { return parse_graph(read_file(path)); }

namespace detail {

inline std::string render_subset(const std::vector<std::string>& ground, VSet s) {
  std::vector<std::string> members;
  for (Vertex v : vertices(s)) members.push_back(ground[v]);
  std::sort(members.begin(), members.end());
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) out += ' ';
    out += members[i];
  }
  return out;
}

}  // namespace detail

// Imset CSV: `subset,value` header, one row per non-zero entry, subsets as
// space-joined sorted vertex names, rows ordered by size then rendering.
inline std::string imset_to_csv(const Imset& u) {
  std::vector<std::pair<std::pair<int, std::string>, std::int64_t>> rows;
  for (VSet s = 0; s <= u.all(); ++s)
    if (u[s] != 0) rows.push_back({{set_size(s), detail::render_subset(u.ground, s)}, u[s]});
  std::sort(rows.begin(), rows.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::ostringstream out;
  out << "subset,value\n";
  for (const auto& r : rows) out << r.first.second << ',' << r.second << '\n';
  return out.str();
}

inline Imset imset_from_csv(const std::string& csv, const std::vector<std::string>& ground) {
  std::vector<std::string> lines = detail::split_lines(csv);
  if (lines.empty() || detail::trim(lines[0]) != "subset,value")
    throw ValidationError("line 1: expected header 'subset,value'");
  Imset u(ground);
  std::vector<char> seen(std::size_t{1} << u.p(), 0);
  for (int li = 2; li <= static_cast<int>(lines.size()); ++li) {
    std::string line = detail::trim(lines[li - 1]);
    if (line.empty()) continue;
    std::size_t comma = line.rfind(',');
    if (comma == std::string::npos) throw detail::at_line(li, "expected 'subset,value' row");
    std::string valueTok = detail::trim(line.substr(comma + 1));
    VSet s = 0;
    for (const std::string& name : detail::split_ws(line.substr(0, comma))) {
      Vertex v = -1;
      for (int i = 0; i < u.p(); ++i)
        if (ground[i] == name) v = i;
      if (v < 0) throw detail::at_line(li, "unknown vertex '" + name + "'");
      s |= bit(v);
    }
    if (seen[s]) throw detail::at_line(li, "duplicate subset row");
    seen[s] = 1;
    try {
      std::size_t used = 0;
      u[s] = std::stoll(valueTok, &used);
      if (used != valueTok.size()) throw std::invalid_argument(valueTok);
    } catch (const std::exception&) {
      throw detail::at_line(li, "malformed value '" + valueTok + "'");
    }
  }
  return u;
}

struct DataMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd x;  // one sample per row
};

// Data CSV: header row of vertex names, then one numeric row per sample.
// Lines starting with '#' are comments (tools prepend "# seed=..." lines).
inline DataMatrix parse_data_csv(const std::string& csv) {
  std::vector<std::string> lines = detail::split_lines(csv);
  int hd = 1;
  while (hd <= static_cast<int>(lines.size()) &&
         (detail::trim(lines[hd - 1]).empty() || detail::trim(lines[hd - 1])[0] == '#'))
    ++hd;
  if (hd > static_cast<int>(lines.size()))
    throw ValidationError("line " + std::to_string(hd) + ": empty data file");
  DataMatrix d;
  {
    std::istringstream header(lines[hd - 1]);
    std::string field;
    while (std::getline(header, field, ',')) {
      std::string name = detail::trim(field);
      if (name.empty())
        throw ValidationError("line " + std::to_string(hd) + ": empty column name");
      d.names.push_back(name);
    }
  }
  if (d.names.empty())
    throw ValidationError("line " + std::to_string(hd) + ": empty data file");
  const int p = static_cast<int>(d.names.size());
  std::vector<std::vector<double>> rows;
  for (int li = hd + 1; li <= static_cast<int>(lines.size()); ++li) {
    std::string line = detail::trim(lines[li - 1]);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(detail::parse_number(field, li));
    if (static_cast<int>(row.size()) != p)
      throw detail::at_line(li, "expected " + std::to_string(p) + " fields, found " +
                                    std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  d.x.resize(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < p; ++j) d.x(static_cast<Eigen::Index>(i), j) = rows[i][j];
  return d;
}

inline std::string data_to_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& x) {
  std::ostringstream out;
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) out << (c ? "," : "") << format_double(x(r, c));
    out << '\n';
  }
  return out.str();
}

// Covariance CSV: same layout with exactly one row per vertex; small
// asymmetries from rounding are symmetrized away.
inline DataMatrix parse_covariance_csv(const std::string& csv) {
  DataMatrix d = parse_data_csv(csv);
  const int p = static_cast<int>(d.names.size());
  if (d.x.rows() != p)
    throw ValidationError("covariance matrix must have exactly " + std::to_string(p) + " rows");
  double scale = std::max(1.0, d.x.cwiseAbs().maxCoeff());
  if ((d.x - d.x.transpose()).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw ValidationError("covariance matrix is not symmetric");
  d.x = ((d.x + d.x.transpose()) / 2.0).eval();
  return d;
}

}  // namespace mci
