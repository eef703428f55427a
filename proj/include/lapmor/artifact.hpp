#pragma once

#include <map>
#include <string>
#include <vector>

#include "lapmor/contour.hpp"
#include "lapmor/fom_laplace.hpp"
#include "lapmor/rom.hpp"

namespace lapmor {

/// Everything the online phase needs, minus the coefficient functions which
/// are re-bound from the model named in `meta`.
struct OfflineArtifact {
  std::map<std::string, std::string> meta;
  QuadratureGrid grid;
  TimeWindow window;
  Vec sigma_lb;
  ReducedBasis basis;
  ReducedModel reduced;
  std::vector<ReducedBasis> local_bases;  // non-empty for the local greedy
  std::vector<ReducedModel> local_models;
};

inline constexpr std::uint32_t kArtifactVersion = 2;

void save_artifact(const std::string& path, const OfflineArtifact& art);
/// Reduced models come back unattached; call attach(model) before use.
OfflineArtifact load_artifact(const std::string& path);

}  // namespace lapmor
