#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tneat/genome.hpp"

namespace tneat {

/*!
 * Line-oriented genome document:
 *
 *     tneat-genome 1
 *     inputs 2
 *     outputs 1
 *     max_nodes 4
 *     max_conns 4
 *     nodes
 *     0 0 1 0 0
 *     ...                      (exactly max_nodes rows)
 *     conns
 *     0 2 1 0.5
 *     null null null null      (padding row)
 *     ...                      (exactly max_conns rows)
 *     end
 *
 * Reals use the shortest round-trip representation, so parse(serialize(g))
 * is bitwise identical to g. NaN cells are written as `null`.
 */
std::string serialize_genome(GenomeView genome);

/// Throws ParseError with line/field diagnostics, including integrity
/// violations such as a live connection to a missing node.
GenomeTensors parse_genome(std::string_view document);

GenomeTensors load_genome(const std::filesystem::path& path);
void save_genome(const std::filesystem::path& path, GenomeView genome);

}  // namespace tneat
