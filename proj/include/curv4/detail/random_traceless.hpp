#pragma once

#include <random>

namespace curv4 {

template <class Rng>
SymBilinear4<double> random_traceless_symmetric(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymBilinear4<double> a;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) a.set(i, j, u(rng));
  const double shift = a.trace() / 4.0;
  for (int i = 0; i < 4; ++i) a.set(i, i, a(i, i) - shift);
  return a;
}

}  // namespace curv4
