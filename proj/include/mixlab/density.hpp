#pragma once

#include "mixlab/model.hpp"

namespace mixlab {

// All density arithmetic is done in log space so that component scales
// down to 1e-150 stay finite; -infinity is a legal log-density.

double log_component_density(const ComponentFamily& family, const ParamPoint& atom, double x);
double component_density(const ComponentFamily& family, const ParamPoint& atom, double x);

double log_mixture_density(const ComponentFamily& family, const MixingDistribution& g, double x);
double mixture_density(const ComponentFamily& family, const MixingDistribution& g, double x);

// Sum of log mixture densities; -infinity when any observation has zero
// density (a legal value, not an error).
double log_likelihood(const ComponentFamily& family, const MixingDistribution& g,
                      const Sample& sample);

// Max-shifted log-sum-exp.
double log_sum_exp(const double* vals, std::size_t n);
double log_sum_exp(const std::vector<double>& vals);

namespace detail {
// log of the normal density with the (x-mu)^2/sigma^2 term computed so
// that overflow degrades to -infinity rather than NaN.
double log_normal_density(double x, double mean, double sd);
double log_poisson_pmf(double x, double rate);
}  // namespace detail

}  // namespace mixlab
