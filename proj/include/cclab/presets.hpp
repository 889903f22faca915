#pragma once

#include "cclab/dual.hpp"
#include "cclab/metric.hpp"

namespace cclab {

// Builds a metric with exact derivative evaluators from per-component
// expressions (symmetric; pass the upper triangle).
MetricField metric_from_exprs(const std::array<std::array<ScalarExpr, 3>, 3>& comps,
                              bool periodic, std::string tag);

ConformalFactor conformal_from_expr(const ScalarExpr& mu, bool boundary_unit,
                                    bool boundary_flat, std::string tag);

DiffeoField diffeo_from_exprs(const ScalarExpr& f1, const ScalarExpr& f2,
                              const ScalarExpr& f3, bool boundary_fixing,
                              std::string tag);

// ---- metric presets ------------------------------------------------------
// flat                : Euclidean delta
// conformal_flat(amp) : e^{2 mu} delta with a generic non-gauge mu
// warped(c1,c2,c3)    : e^{2 phi(xn)} dx'^2 + dxn^2, phi a cubic polynomial
// wavy_warp(...)      : warped profile modulated tangentially
// tangential_wave(a,b): wavy tangential block, unit normal part
// sheared(amp)        : nonzero g_{1n} inside the slab, block on the faces
// sphere_patch()      : round unit 3-sphere in stereographic chart (not periodic)
MetricField make_flat_metric();
MetricField make_conformal_flat_metric(double amp);
MetricField make_warped_metric(double c1, double c2, double c3);
MetricField make_wavy_warp_metric(double c1, double c2, double c3, double amp);
MetricField make_tangential_wave_metric(double amp, double off_amp);
MetricField make_sheared_metric(double amp);
MetricField make_sphere_patch_metric();

// ---- conformal factor presets -------------------------------------------
ConformalFactor make_constant_factor(double c0);
// gauge-conditioned: mu = amp xn^2(1-xn)^2 sin(2 pi x1)
ConformalFactor make_gauge_wave_factor(double amp);
// gauge-conditioned, different tangential profile
ConformalFactor make_gauge_wave2_factor(double amp);
// vanishing to third order at both faces (leaves jets through order 2 alone)
ConformalFactor make_cubic_collar_factor(double amp);
// c|faces = 1 but the normal derivative does not vanish (negative control)
ConformalFactor make_linear_defect_factor(double amp);
// generic factor for scaling-law checks, no gauge conditions
ConformalFactor make_generic_factor(double amp);

// ---- diffeo presets ------------------------------------------------------
// identity + xn^2(1-xn)^2 collar displacement; fixes both faces with
// identity differential there.
DiffeoField make_collar_wave_diffeo(double ax, double ay, double an);

// generic smooth scalar test fields (periodic tangentially)
std::function<double(const Vec3&)> make_test_field(int which);

}  // namespace cclab
