// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csma/chordal.hpp"
#include "csma/graph.hpp"

namespace csma {

struct GraphFile {
  ConflictGraph graph;
  std::vector<std::pair<double, double>> coords;  // empty unless geometric
};

/// {"n": N, "edges": [[i,j],...], "coords": [[x,y],...]}; edges with i < j,
/// sorted; "coords" only when given.
std::string graph_to_json(const ConflictGraph& g,
                          const std::vector<std::pair<double, double>>& coords = {});
GraphFile graph_from_json(std::string_view text);

/// One "i j" pair per line, '#' starts a comment. An optional line "n N"
/// fixes the node count (otherwise max id + 1).
GraphFile parse_edge_list(std::string_view text);

/// JSON when the content starts with '{', edge list otherwise.
GraphFile parse_graph(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// {"cliques": [[...],...], "tree_edges": [[a,b],...]}
std::string clique_tree_to_json(const CliqueTree& t);

/// Reals separated by commas, whitespace or newlines, or a JSON array.
std::vector<double> parse_real_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

/// printf "%.12g"; locale independent.
std::string format_real(double x);

}  // namespace csma
