#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "maxtsp/graph.hpp"

namespace maxtsp {

enum class Family { uniform_random, metric_euclidean, kite_heavy, adversarial_alternating };

inline constexpr Weight kMaxGeneratedWeight = 1000;

std::string_view family_name(Family f);
/// InstanceError on an unknown name.
Family parse_family(std::string_view name);
std::vector<Family> all_families();

struct Instance {
  CompleteGraph graph;
  std::string name;
  std::uint64_t seed = 0;
  std::string family;
};

/// Deterministic for each (family, n, seed); weights in 0..1000.
Instance generate_instance(Family family, int n, std::uint64_t seed);

/// Text format: "maxtsp 1", then n, then the upper triangle row-major.
std::string format_instance(const CompleteGraph& g);
/// InstanceError on malformed input.
CompleteGraph parse_instance(std::string_view text);

CompleteGraph read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const CompleteGraph& g);

}  // namespace maxtsp
