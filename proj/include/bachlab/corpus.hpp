#pragma once

// Deterministic regression corpora: random analytic metrics and fields
// written as expressions, so every consumer (tests, suite, acceptance)
// evaluates the same inputs for a given seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bachlab/catalog.hpp"

namespace bachlab::corpus {

using Rng = std::mt19937_64;

/// %.17g, enough digits to round-trip.
std::string fmt(double v);

/// Metric delta + small analytic perturbation on [-0.5, 0.5]^n, diagonally
/// dominant so positive definite on the whole box.
ChartSpec random_metric(int dim, Rng& rng);

/// e^{2u} g for every component.
ChartSpec conformal_rescale(const ChartSpec& c, const std::string& u);

/// Random analytic function of the chart coordinates.
std::string random_function(const ChartSpec& c, Rng& rng, double amplitude);

/// 3-manifolds for the sign laws: Einstein members first, then generic.
struct ThreeManifold {
  std::string name;
  ChartSpec chart;
  bool einstein;
};
std::vector<ThreeManifold> three_manifolds(Rng& rng, int random_count = 3);

/// Surface charts for the K x L family (mixed constant and variable
/// curvature).
std::vector<ChartSpec> surfaces(Rng& rng, int random_count = 3);

/// Smooth function on the unit sphere chart (theta, phi) built from the
/// ambient coordinates.
std::string sphere_function(Rng& rng, double amplitude);

/// Smooth vector field on the unit sphere chart: combinations of
/// grad x_i and J grad x_i with smooth coefficients.
std::vector<std::string> sphere_vector_field(Rng& rng);

/// Random conformal field of the unit sphere chart: constant combination
/// of grad x_i (conformal) and J grad x_i (Killing).
std::vector<std::string> sphere_mobius_field(Rng& rng);

/// Periodic analytic function / field on a flat torus of period 2 pi.
std::string torus_function(Rng& rng, double amplitude);
std::vector<std::string> torus_vector_field(Rng& rng);

/// Conformal factor on the sphere chart.
std::string sphere_conformal_factor(Rng& rng);

}  // namespace bachlab::corpus
