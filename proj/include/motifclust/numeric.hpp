#ifndef MOTIFCLUST_NUMERIC_HPP
#define MOTIFCLUST_NUMERIC_HPP

#include <span>

namespace motifclust {

/// log Gamma(x) for x > 0; reentrant (does not touch the global signgam).
double log_gamma(double x);

/// log sum exp over the entries; -inf entries are ignored, all -inf gives -inf.
double log_sum_exp(std::span<const double> values);

}  // namespace motifclust

#endif  // MOTIFCLUST_NUMERIC_HPP
