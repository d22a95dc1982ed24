#pragma once

#include "cbpa/types.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace cbpa {

/// Equal division of `demand` across the coalition marked in `winners`.
///
/// Every winner gets the same share unless that share exceeds what it has
/// left; such members are frozen at their remaining payload and the shortfall
/// is divided again among the rest. When the coalition cannot cover the demand
/// every winner simply contributes everything it has left.
///
/// Non-winners always receive zero. Throws std::invalid_argument on a negative
/// demand or remaining payload.
template <typename WinnerDerived, typename RemainingDerived>
Eigen::Matrix<typename RemainingDerived::Scalar, Eigen::Dynamic, 1>
allocate_average(const Eigen::DenseBase<WinnerDerived>& winners,
                 const Eigen::DenseBase<RemainingDerived>& remaining,
                 typename RemainingDerived::Scalar demand)
{
  using S = typename RemainingDerived::Scalar;
  using Out = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  const Index n = remaining.size();
  if (winners.size() != n) throw std::invalid_argument("allocate_average: size mismatch");
  if (!(demand >= S(0))) throw std::invalid_argument("allocate_average: negative demand");
  if ((remaining.derived().array() < S(0)).any())
    throw std::invalid_argument("allocate_average: negative remaining payload");

  Out out = Out::Zero(n);
  Eigen::Matrix<bool, Eigen::Dynamic, 1> active(n);
  S coalition_total(0);
  Index active_count = 0;
  for (Index k = 0; k < n; ++k) {
    active(k) = static_cast<bool>(winners.derived()(k));
    if (active(k)) {
      coalition_total += remaining.derived()(k);
      ++active_count;
    }
  }

  if (coalition_total <= demand) {
    for (Index k = 0; k < n; ++k)
      if (active(k)) out(k) = remaining.derived()(k);
    return out;
  }

  S residual = demand;
  while (residual > S(kTolerance) && active_count > 0) {
    const S share = residual / static_cast<S>(active_count);
    bool froze = false;
    for (Index k = 0; k < n; ++k) {
      if (!active(k) || remaining.derived()(k) > share) continue;
      out(k) = remaining.derived()(k);
      residual -= out(k);
      active(k) = false;
      --active_count;
      froze = true;
    }
    if (froze) continue;
    for (Index k = 0; k < n; ++k)
      if (active(k)) out(k) = share;
    residual = S(0);
  }
  return out;
}

} // namespace cbpa
