#pragma once

#include <span>

namespace tlkit {

// Pairwise summation over fixed 8-element leaves. The result depends only on
// the input order, never on thread count.
double pairwise_sum(std::span<const double> v);

}  // namespace tlkit
