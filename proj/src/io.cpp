// SPDX-License-Identifier: Apache-2.0
#include "csma/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csma/error.hpp"

namespace csma {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail(ErrorCode::kInvalidArgument, "cannot parse number '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

std::string graph_to_json(const ConflictGraph& g,
                          const std::vector<std::pair<double, double>>& coords) {
  json j;
  j["n"] = g.size();
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  if (!coords.empty()) {
    json xy = json::array();
    for (auto [x, y] : coords) xy.push_back({x, y});
    j["coords"] = std::move(xy);
  }
  return j.dump() + "\n";
}

GraphFile graph_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed graph JSON: ") + e.what());
  }
  try {
    GraphFile out;
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    out.graph = ConflictGraph(n, edges);
    if (j.contains("coords")) {
      for (const auto& c : j.at("coords")) out.coords.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
      if (static_cast<int>(out.coords.size()) != n) {
        fail(ErrorCode::kInvalidArgument, "coords length differs from n");
      }
    }
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("graph JSON needs \"n\" and \"edges\": ") + e.what());
  }
}

GraphFile parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  int n = -1;
  int top = -1;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto tok = tokens(line);
    if (tok.size() != 2) {
      fail(ErrorCode::kInvalidArgument, "edge list line " + std::to_string(line_no) + ": expected two fields");
    }
    if (tok[0] == "n") {
      n = parse_number<int>(tok[1]);
      continue;
    }
    const int a = parse_number<int>(tok[0]);
    const int b = parse_number<int>(tok[1]);
    top = std::max({top, a, b});
    edges.emplace_back(a, b);
  }
  if (n < 0) n = top + 1;
  return {ConflictGraph(n, edges), {}};
}

GraphFile parse_graph(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') return graph_from_json(t);
  return parse_edge_list(text);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

std::string clique_tree_to_json(const CliqueTree& t) {
  json j;
  j["cliques"] = t.cliques;
  json edges = json::array();
  for (auto [a, b] : t.tree_edges) edges.push_back({a, b});
  j["tree_edges"] = std::move(edges);
  return j.dump() + "\n";
}

std::vector<double> parse_real_list(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '[') {
    try {
      return json::parse(t).get<std::vector<double>>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kInvalidArgument, std::string("malformed number array: ") + e.what());
    }
  }
  std::vector<double> out;
  for (auto tok : tokens(t)) out.push_back(parse_number<double>(tok));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '[') t = t.substr(1, t.size() >= 2 && t.back() == ']' ? t.size() - 2 : t.size() - 1);
  for (auto tok : tokens(t)) out.push_back(parse_number<int>(tok));
  return out;
}

std::string format_real(double x) {
  char buf[64];
  // to_chars is locale independent.
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, ptr);
}

}  // namespace csma
