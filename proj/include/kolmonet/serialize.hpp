#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "kolmonet/builder.hpp"
#include "kolmonet/network.hpp"

namespace kolmonet {

// Network documents are JSON:
//   {"format": "kolmonet-network", "version": 1, "dims": [l0, ..., lL],
//    "layers": [{"weight": [row-major reals] | "weight_csr": {...}, "bias": [...]}, ...],
//    "provenance": {...}}            (solution networks only)
// Sparse layers use {"row_ptr": [...], "col": [...], "val": [...]}.

std::string serialize(const Network& net);
Network deserialize_network(std::string_view text);

std::string serialize(const SolutionNet& sol);
SolutionNet deserialize_solution(std::string_view text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64 digest (hex) of the problem coefficients, horizon and constants.
std::string problem_hash(const PdeProblem& problem);

}  // namespace kolmonet
