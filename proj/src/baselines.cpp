// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#include "ordbias/baselines.hpp"

namespace ordbias {

PosteriorSamples fit_baseline(const BaselineKind& kind, const RatingsDataset& data,
                              const Hyperparameters& hp, const RunConfig& cfg) {
  return GibbsSampler(data, hp, cfg, kind).fit();
}

}  // namespace ordbias
