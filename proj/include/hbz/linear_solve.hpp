#pragma once

#include <functional>

#include "hbz/seqspace.hpp"

namespace hbz {

using LinearMap = std::function<CoeffSequence(const CoeffSequence&)>;

struct GmresOptions {
  double rel_tol = 1e-14;
  int restart = 40;
  int max_iter = 400;
};

struct GmresResult {
  CoeffSequence x;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Solves op(x) = rhs by restarted GMRES with right preconditioner precond,
/// starting from x = precond(rhs). Modified Gram-Schmidt Arnoldi with Givens
/// rotations; stops when ||rhs - op(x)|| <= rel_tol * ||rhs||.
GmresResult gmres(const LinearMap& op, const LinearMap& precond, const CoeffSequence& rhs,
                  const GmresOptions& options = {});

}  // namespace hbz
