// Copyright 2026 The povm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>

#include "povm/error.hpp"

namespace povm {

/// Numerical thresholds shared by every operation in the library.
///
/// `rank_tol` and `indep_tol` are relative cutoffs; the others are absolute
/// (Frobenius or eigenvalue) bounds. Defaults sit well above double noise
/// for dimensions up to ~16.
struct Tolerances {
  double herm_tol = 1e-10;
  double psd_tol = 1e-10;
  double rank_tol = 1e-9;
  double indep_tol = 1e-9;
  double recon_tol = 1e-8;
  double zero_effect_tol = 1e-10;

  /// Relative singular gaps within this factor of `indep_tol` are flagged
  /// borderline by the independence test.
  static constexpr double borderline_factor = 100.0;

  Tolerances scaled(double factor) const {
    Tolerances t = *this;
    t.herm_tol *= factor;
    t.psd_tol *= factor;
    t.rank_tol *= factor;
    t.indep_tol *= factor;
    t.recon_tol *= factor;
    t.zero_effect_tol *= factor;
    return t;
  }

  void check() const {
    for (double v : {herm_tol, psd_tol, rank_tol, indep_tol, recon_tol,
                     zero_effect_tol}) {
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorKind::BadTolerance,
                    "tolerances must be finite and non-negative");
      }
    }
  }
};

}  // namespace povm
