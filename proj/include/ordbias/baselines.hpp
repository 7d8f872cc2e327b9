// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ordbias/gibbs.hpp"
#include "ordbias/types.hpp"

namespace ordbias {

// The comparison variants are configurations of the one engine:
//   ordinal_link=false  treats ratings as reals (conjugate, no (v, omega, c) layer)
//   bias none           pins the offset at zero
//   bias global         one shared offset (a single group)
// (ordinal_link=true, bias group) is the full model.
using BaselineKind = ModelSpec;

PosteriorSamples fit_baseline(const BaselineKind& kind, const RatingsDataset& data,
                              const Hyperparameters& hp, const RunConfig& cfg);

}  // namespace ordbias
