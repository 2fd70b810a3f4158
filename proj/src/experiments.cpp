#include "horocauchy/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "horocauchy/errors.hpp"
#include "horocauchy/hyperbolic.hpp"
#include "horocauchy/parallel.hpp"
#include "horocauchy/spectral.hpp"
#include "horocauchy/test_functions.hpp"
#include "horocauchy/transforms.hpp"

namespace horocauchy {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

const std::map<std::string, std::string> kDefaultFunction{
    {"forward-const", "const:1"},
    {"series-consistency", ""},
    {"cycle-independence", "rational:s=0.3"},
    {"calibrate", ""},
    {"invert", ""},
    {"pde-harmonic", "rational:s=0.3"},
    {"pde-wave", "rational:s=0.3"},
    {"hyperbolic-forward", "bump:r=0.8"},
    {"hyperbolic-invert", "bump:r=0.8"},
};

const std::map<std::string, int> kDefaultCases{
    {"forward-const", 100}, {"series-consistency", 20}, {"cycle-independence", 10},
    {"calibrate", 1},       {"invert", 50},             {"pde-harmonic", 10},
    {"pde-wave", 10},       {"hyperbolic-forward", 5},  {"hyperbolic-invert", 10},
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string fmt(Complex v) { return fmt(v.real()) + (v.imag() < 0 ? "" : "+") + fmt(v.imag()) + "i"; }

template <class Vec>
std::string fmt_vec(const Vec& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
    return s + ")";
}

std::mt19937_64 case_rng(std::uint64_t seed, int case_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(case_id + 1)};
    return std::mt19937_64(seq);
}

struct CaseMeta {
    std::string invariant;
    double tolerance;
    Provenance provenance;
};

ReportRow compare(int id, std::string inputs, Complex value, Complex ref, const CaseMeta& meta, bool relative) {
    ReportRow row;
    row.case_id = id;
    row.inputs = std::move(inputs);
    row.value = value;
    row.reference = ref;
    row.abs_err = std::abs(value - ref);
    row.rel_err = std::abs(ref) > 0.0 ? row.abs_err / std::abs(ref) : row.abs_err;
    row.error = relative ? row.rel_err : row.abs_err;
    row.tolerance = meta.tolerance;
    row.invariant = meta.invariant;
    row.provenance = meta.provenance;
    row.pass = row.error <= meta.tolerance;
    return row;
}

ReportRow measure(int id, std::string inputs, Complex value, double error, const CaseMeta& meta) {
    ReportRow row;
    row.case_id = id;
    row.inputs = std::move(inputs);
    row.value = value;
    row.abs_err = error;
    row.rel_err = error;
    row.error = error;
    row.tolerance = meta.tolerance;
    row.invariant = meta.invariant;
    row.provenance = meta.provenance;
    row.pass = error <= meta.tolerance;
    return row;
}

/// Runs body(i) for every case in parallel; errors become failing rows annotated with the message.
template <class Body>
std::vector<ReportRow> run_cases(int n, int first_id, const CaseMeta& meta, Body&& body) {
    std::vector<ReportRow> rows(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const int id = first_id + static_cast<int>(i);
        try {
            rows[i] = body(static_cast<int>(i), id);
        } catch (const Error& e) {
            ReportRow row;
            row.case_id = id;
            row.invariant = meta.invariant;
            row.tolerance = meta.tolerance;
            row.provenance = meta.provenance;
            row.error = row.abs_err = row.rel_err = std::numeric_limits<double>::infinity();
            row.note = e.what();
            rows[i] = std::move(row);
        }
    });
    return rows;
}

void append(std::vector<ReportRow>& out, std::vector<ReportRow> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

int case_count(const ExperimentConfig& c) { return c.cases > 0 ? c.cases : kDefaultCases.at(c.experiment); }

std::string function_spec(const ExperimentConfig& c) {
    return c.test_function.empty() ? kDefaultFunction.at(c.experiment) : c.test_function;
}

TransformContext make_context(const ExperimentConfig& c) {
    return TransformContext::standard(c.nodes[0], c.nodes[1], c.nodes[2]);
}

const QuadraticSpace& euclid() {
    static const QuadraticSpace s = QuadraticSpace::euclidean(2);
    return s;
}

const QuadraticSpace& lorentz() {
    static const QuadraticSpace s = QuadraticSpace::lorentzian(2);
    return s;
}

/// zeta in Xi_S with |zeta . z| <= radius on the real sphere (Delta(Re zeta) = radius^2 at most).
ConePoint random_cone_point(std::mt19937_64& rng, double radius, double min_radius = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s = std::sqrt(min_radius * min_radius + (radius * radius - min_radius * min_radius) * u(rng));
    return ConePoint(euclid(), random_null_vector(2, std::polar(s, 2.0 * kPi * u(rng)), rng));
}

SpherePoint random_sphere_point(std::mt19937_64& rng) {
    return SpherePoint(euclid(), random_unit_vector(3, rng).cast<Complex>());
}

RVector random_direction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const double a = u(rng);
    RVector dir(2);
    dir << std::cos(a), std::sin(a);
    return dir;
}

RVector random_boundary_direction(std::mt19937_64& rng) {
    const RVector d = random_direction(rng);
    RVector xi(3);
    xi << 1.0, d[0], d[1];
    return xi;
}

// ---------------------------------------------------------------- experiments

void forward_const(const ExperimentConfig& c, ExperimentReport& rep) {
    const TestFunction f = TestFunction::parse(function_spec(c), c.d);
    if (f.kind() != TestFunction::Kind::Constant) {
        throw ParseError("test_function", "forward-const needs a const:<value> function");
    }
    const TransformContext ctx = make_context(c);
    const Complex expected = 8.0 * kPi * f.constant_value();
    const CaseMeta meta{"forward-of-constant", c.tolerance("forward-of-constant", 1e-7), Provenance::Oracle};
    rep.rows = run_cases(case_count(c), 0, meta, [&](int, int id) {
        auto rng = case_rng(c.seed, id);
        const ConePoint zeta = random_cone_point(rng, std::sqrt(0.8));
        return compare(id, "zeta=" + fmt_vec(zeta.coords()), forward(ctx, f, zeta), expected, meta, true);
    });
}

void series_consistency(const ExperimentConfig& c, ExperimentReport& rep) {
    const TransformContext ctx = make_context(c);
    const std::string spec = function_spec(c);
    const int terms = 40;
    const CaseMeta meta{"series-vs-forward", c.tolerance("series-vs-forward", 1e-8), Provenance::PaperFormula};
    rep.extra["series_terms"] = terms;
    rep.rows = run_cases(case_count(c), 0, meta, [&](int, int id) {
        auto rng = case_rng(c.seed, id);
        const TestFunction f =
            spec.empty() ? TestFunction::rational(euclid(), random_null_vector(2, 0.35, rng)) : TestFunction::parse(spec, c.d);
        const ConePoint zeta = random_cone_point(rng, 0.5, 0.1);
        const Complex full = forward(ctx, f, zeta);
        const Complex partial = series_sum(ctx, f, zeta, terms);
        return compare(id, f.describe() + " zeta=" + fmt_vec(zeta.coords()), partial, full, meta, false);
    });
}

void cycle_independence(const ExperimentConfig& c, ExperimentReport& rep) {
    const TransformContext ctx = make_context(c);
    const TestFunction f = TestFunction::parse(function_spec(c), c.d);
    auto rng0 = case_rng(c.seed, -1);
    std::vector<ConePoint> zetas;
    for (int k = 0; k < 5; ++k) zetas.push_back(random_cone_point(rng0, 0.7));
    std::vector<Complex> base;
    for (const ConePoint& z : zetas) base.push_back(forward(ctx, f, z));

    const CaseMeta meta{"cycle-independence", c.tolerance("cycle-independence", 1e-7), Provenance::PaperFormula};
    rep.rows = run_cases(case_count(c), 0, meta, [&](int, int id) {
        auto rng = case_rng(c.seed, id);
        const ComplexRotation g = ComplexRotation::exp(euclid(), random_so_generator(3, 0.15, rng));
        const TransformContext moved = ctx.with_cycle(rotate_cycle(g, ctx.sphere_cycle()));
        double worst = 0.0;
        std::size_t at = 0;
        for (std::size_t k = 0; k < zetas.size(); ++k) {
            const double err = std::abs(forward(moved, f, zetas[k]) - base[k]) / std::abs(base[k]);
            if (err >= worst) worst = err, at = k;
        }
        ReportRow row = compare(id, f.describe() + " rotation=" + std::to_string(id) + " zeta#" + std::to_string(at),
                                forward(moved, f, zetas[at]), base[at], meta, true);
        row.error = worst;
        row.pass = worst <= meta.tolerance;
        return row;
    });
}

std::vector<int> degree_range(const ExperimentConfig& c) {
    std::vector<int> degrees;
    for (int m = 0; m <= c.degree_max; ++m) degrees.push_back(m);
    return degrees;
}

void calibrate_experiment(const ExperimentConfig& c, ExperimentReport& rep) {
    const TransformContext ctx = make_context(c);
    const std::vector<int> degrees = degree_range(c);
    const CalibrationReport cal = calibrate(ctx, degrees, {.seed = c.seed});
    rep.extra["calibration"] = cal.to_json();

    const CaseMeta gamma_meta{"gamma-funk-hecke", c.tolerance("gamma-funk-hecke", 1e-7), Provenance::Oracle};
    const CaseMeta flat_meta{"kappa-flat", c.tolerance("kappa-flat", 1e-5), Provenance::Measured};
    int id = 0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const int m = degrees[i];
        rep.rows.push_back(compare(id++, "m=" + std::to_string(m), cal.gamma[i], -16.0 * kPi * kPi / (2 * m + 1),
                                   gamma_meta, true));
    }
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        ReportRow row = compare(id++, "m=" + std::to_string(degrees[i]), cal.kappa[i], cal.kappa.front(), flat_meta, true);
        row.provenance = Provenance::Measured;
        rep.rows.push_back(std::move(row));
    }
    rep.rows.push_back(measure(id++, "all degrees and trials", cal.kappa_mean, cal.kappa_spread,
                               {"kappa-spread", c.tolerance("kappa-spread", 1e-5), Provenance::Measured}));
}

void invert_experiment(const ExperimentConfig& c, ExperimentReport& rep) {
    const TransformContext ctx = make_context(c);
    const std::vector<int> degrees = degree_range(c);
    const CalibrationReport cal = calibrate(ctx, degrees, {.seed = c.seed});
    rep.extra["kappa"] = {cal.kappa_mean.real(), cal.kappa_mean.imag()};
    rep.extra["kappa_spread"] = cal.kappa_spread;
    const int points = 50;

    const CaseMeta meta{"inversion", c.tolerance("inversion", 1e-5), Provenance::PaperFormula};
    rep.rows = run_cases(case_count(c), 0, meta, [&](int, int id) {
        auto rng = case_rng(c.seed, id);
        std::normal_distribution<double> n;
        std::vector<TestFunction> parts;
        std::vector<Complex> coeffs;
        for (int l = 0; l <= c.degree_max; ++l) {
            parts.push_back(TestFunction::null_harmonic(euclid(), random_null_vector(2, 1.0, rng), l));
            coeffs.emplace_back(n(rng), n(rng));
        }
        const SphereFunction f = [&](const CVector& z) {
            Complex v = 0.0;
            for (std::size_t l = 0; l < parts.size(); ++l) v += coeffs[l] * parts[l](z);
            return v;
        };
        const std::vector<Complex> samples = weighted_samples(ctx, f);
        double worst = 0.0, fmax = 0.0;
        Complex worst_value = 0.0, worst_ref = 0.0;
        for (int k = 0; k < points; ++k) {
            const SpherePoint x = random_sphere_point(rng);
            const Complex ref = f(x.coords());
            const Complex rec = invert_samples(ctx, samples, x, c.degree_max, cal.kappa_mean);
            fmax = std::max(fmax, std::abs(ref));
            if (std::abs(rec - ref) >= worst) worst = std::abs(rec - ref), worst_value = rec, worst_ref = ref;
        }
        ReportRow row = compare(id, "band-limited M=" + std::to_string(c.degree_max) + " points=" + std::to_string(points),
                                worst_value, worst_ref, meta, false);
        row.rel_err = worst / fmax;
        row.error = row.rel_err;
        row.pass = row.error <= meta.tolerance;
        row.note = "error relative to max |f| over the points";
        return row;
    });
}

/// Central-difference Laplacian in C^3 plus a scale: |center| + sum of the absolute second differences.
template <class Fn>
std::pair<Complex, double> laplacian(Fn&& F, const CVector& z, double h) {
    const Complex center = F(z);
    Complex lap = 0.0;
    double scale = std::abs(center);
    for (int j = 0; j < z.size(); ++j) {
        CVector zp = z, zm = z;
        zp[j] += h;
        zm[j] -= h;
        const Complex d2 = (F(zp) - 2.0 * center + F(zm)) / (h * h);
        lap += d2;
        scale += std::abs(d2);
    }
    return {lap, scale};
}

void pde_harmonic(const ExperimentConfig& c, ExperimentReport& rep) {
    const TransformContext ctx = make_context(c);
    const TestFunction f = TestFunction::parse(function_spec(c), c.d);
    const std::vector<Complex> samples = weighted_samples(ctx, f);
    // F = sum of the Fourier components up to degree_max: a polynomial on the cone, finite on L_R(x).
    const ConeFunction F = [&](const CVector& zeta) {
        Complex v = 0.0;
        for (const Complex& t : fourier_components(ctx, samples, c.degree_max, zeta)) v += t;
        return v;
    };
    const double h = 1e-3;
    const CaseMeta meta{"dual-harmonic", c.tolerance("dual-harmonic", 1e-4), Provenance::PaperFormula};
    rep.rows = run_cases(case_count(c), 0, meta, [&](int, int id) {
        auto rng = case_rng(c.seed, id);
        std::normal_distribution<double> n;
        const SpherePoint x = random_sphere_point(rng);
        const Cycle lc = l_cycle(x, c.nodes[2]);
        CVector z = x.coords();
        for (int j = 0; j < 3; ++j) z[j] += 0.05 * n(rng);
        const auto [lap, scale] = laplacian([&](const CVector& w) { return dual_extended(F, w, lc); }, z, h);
        return measure(id, "z=" + fmt_vec(z), lap, std::abs(lap) / scale, meta);
    });
}

void pde_wave(const ExperimentConfig& c, ExperimentReport& rep) {
    const TransformContext ctx = make_context(c);
    const TestFunction f = TestFunction::parse(function_spec(c), c.d);
    const double h = 1e-2;
    const CaseMeta meta{"wave-identity", c.tolerance("wave-identity", 1e-4), Provenance::PaperFormula};
    rep.rows = run_cases(case_count(c), 0, meta, [&](int, int id) {
        auto rng = case_rng(c.seed, id);
        std::normal_distribution<double> n;
        CVector zeta(3);
        for (int j = 0; j < 3; ++j) zeta[j] = Complex(n(rng), n(rng));
        zeta *= 0.3 / zeta.norm();
        const Complex p = std::polar(1.5, 0.3 * n(rng));
        const auto [lap, lap_scale] =
            laplacian([&](const CVector& w) { return forward_extended(ctx, f, w, p); }, zeta, h);
        const Complex center = forward_extended(ctx, f, zeta, p);
        const Complex dpp = (forward_extended(ctx, f, zeta, p + h) - 2.0 * center + forward_extended(ctx, f, zeta, p - h)) / (h * h);
        const double scale = lap_scale + std::abs(dpp);
        return measure(id, "zeta=" + fmt_vec(zeta) + " p=" + fmt(p), lap - dpp, std::abs(lap - dpp) / scale, meta);
    });
}

HyperbolicGrid hyperbolic_grid(const ExperimentConfig& c) {
    HyperbolicGrid g;
    g.n_radial = 3 * c.nodes[0];
    g.n_angular = 4 * c.nodes[1];
    g.n_along = c.nodes[1];
    return g;
}

SupportedFunction hyperbolic_function(const ExperimentConfig& c) {
    const TestFunction f = TestFunction::parse(function_spec(c), c.d);
    if (f.kind() != TestFunction::Kind::Bump) {
        throw ParseError("test_function", "hyperbolic experiments need a bump:r=... function");
    }
    return SupportedFunction::from_bump(f);
}

void hyperbolic_forward_experiment(const ExperimentConfig& c, ExperimentReport& rep) {
    const SupportedFunction f = hyperbolic_function(c);
    const HyperbolicGrid grid = hyperbolic_grid(c);
    const TestFunction bump = TestFunction::parse(function_spec(c), c.d);
    int id = 0;

    // Cycle constraints.
    const CaseMeta cyc{"cycle-constraints", c.tolerance("cycle-constraints", 1e-12), Provenance::Oracle};
    std::vector<HyperboloidPoint> bases{HyperboloidPoint(lorentz(), RVector::Unit(3, 0))};
    {
        RVector b(3);
        b << std::cosh(0.5), std::sinh(0.5), 0.0;
        bases.emplace_back(lorentz(), b);
        auto rng = case_rng(c.seed, -1);
        bases.push_back(HyperboloidPoint::from_polar(lorentz(), 1.7, random_direction(rng)));
    }
    append(rep.rows, run_cases(static_cast<int>(bases.size()), id, cyc, [&](int i, int row_id) {
        const HyperboloidPoint& x = bases[i];
        const HyperbolicCycle cycle = hyperbolic_cycle(x, c.nodes[2]);
        double worst = 0.0;
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const CVector xi = cycle.point(k).cast<Complex>();
            const double scale = x.coords().squaredNorm();
            worst = std::max(worst, std::abs(lorentz().delta(xi)) / scale);
            worst = std::max(worst, std::abs(lorentz().pair(xi, x.ccoords()) - 1.0) / scale);
        }
        return measure(row_id, "x=" + fmt_vec(x.coords()), worst, worst, cyc);
    }));
    id += static_cast<int>(bases.size());

    // Lorentz covariance: the bump moved by g, evaluated at g xi.
    const CaseMeta cov{"lorentz-covariance", c.tolerance("lorentz-covariance", 1e-7), Provenance::PaperFormula};
    const int n_cov = case_count(c);
    append(rep.rows, run_cases(n_cov, id, cov, [&](int, int row_id) {
        auto rng = case_rng(c.seed, row_id);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const RMatrix g = lorentz_boost(HyperboloidPoint::from_polar(lorentz(), 1.5 * u(rng), random_direction(rng)));
        const HyperboloidPoint moved(lorentz(), g * f.center.coords());
        const SupportedFunction fg = SupportedFunction::from_bump(TestFunction::bump(moved, f.radius));
        const RVector xi = (0.5 + u(rng)) * random_boundary_direction(rng);
        const Complex lambda(2.0 * u(rng) - 1.0, 0.2 + 0.5 * u(rng));
        // Polar grid on one side, horocyclic coordinates of g xi on the other: the two grids are not related by g.
        const Complex a = hyperbolic_forward(f, XiHPoint::interior(lorentz(), lambda, xi), grid);
        const RVector gxi = g * xi;
        const HorocyclicProfile profile = horocyclic_profile(fg, gxi, grid);
        const Complex b = profile_kernel_integrals(profile, lambda * gxi[0], 1.0, 0)[0];
        return compare(row_id, "lambda=" + fmt(lambda) + " xi=" + fmt_vec(xi), b, a, cov, true);
    }));
    id += n_cov;

    // Truncation stability.
    const CaseMeta trunc{"truncation-stability", c.tolerance("truncation-stability", 1e-12), Provenance::Oracle};
    append(rep.rows, run_cases(1, id, trunc, [&](int, int row_id) {
        auto rng = case_rng(c.seed, row_id);
        const XiHPoint zeta = XiHPoint::interior(lorentz(), Complex(0.7, 0.2), random_boundary_direction(rng));
        const Complex a = hyperbolic_forward(f, zeta, grid, f.radius + grid.margin);
        const Complex b = hyperbolic_forward(f, zeta, grid, 2.0 * (f.radius + grid.margin));
        return compare(row_id, "r_max x2", b, a, trunc, true);
    }));
    ++id;

    // Boundary extrapolation converges monotonically.
    const HyperbolicQuadrature quad = hyperbolic_quadrature(f, grid);
    const std::vector<double> eps = default_boundary_eps();
    const CaseMeta mono{"boundary-monotone", c.tolerance("boundary-monotone", 1e-3), Provenance::Measured};
    append(rep.rows, run_cases(3, id, mono, [&](int, int row_id) {
        auto rng = case_rng(c.seed, row_id);
        std::uniform_real_distribution<double> u(0.7, 1.5);
        const RVector xi = u(rng) * random_boundary_direction(rng);
        const BoundaryValue bv = boundary_value(quad, xi, eps);
        const double rel = bv.error_estimates.back() / std::max(std::abs(bv.value), 1e-300);
        ReportRow row = measure(row_id, "xi=" + fmt_vec(xi), bv.value, rel, mono);
        row.pass = row.pass && bv.monotone;
        if (!bv.monotone) row.note = "extrapolation error estimates not decreasing";
        return row;
    }));
    rep.extra["boundary_eps"] = eps;
    rep.extra["bump"] = bump.describe();
}

void hyperbolic_invert_experiment(const ExperimentConfig& c, ExperimentReport& rep) {
    const SupportedFunction f = hyperbolic_function(c);
    const HyperbolicGrid grid = hyperbolic_grid(c);
    const std::vector<double> eps = default_boundary_eps();
    std::vector<HyperboloidPoint> points;
    auto rng = case_rng(c.seed, -1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RMatrix to_center = lorentz_boost(f.center);
    for (int k = 0; k < case_count(c); ++k) {
        const HyperboloidPoint local = HyperboloidPoint::from_polar(lorentz(), 0.5 * f.radius * u(rng), random_direction(rng));
        points.emplace_back(lorentz(), to_center * local.coords());
    }
    // One probe per point keeps the per-point work parallel; the constant is taken over all of them.
    std::vector<Complex> ratios(points.size()), values(points.size()), refs(points.size());
    std::vector<std::string> errors(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        try {
            const auto probe = probe_hyperbolic_inversion(f, std::span(&points[i], 1), grid, c.nodes[2], eps);
            ratios[i] = probe.ratios[0];
            values[i] = probe.values[0];
            refs[i] = probe.reference[0];
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    Complex constant = 0.0;
    int good = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i].empty()) constant += ratios[i], ++good;
    }
    if (good > 0) constant /= static_cast<double>(good);
    rep.extra["constant"] = {constant.real(), constant.imag()};
    // Diagnostic only: the same comparison restricted to real parts.
    double re_constant = 0.0, re_spread = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i].empty()) re_constant += values[i].real() / refs[i].real() / good;
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i].empty()) re_spread = std::max(re_spread, std::abs(values[i].real() / refs[i].real() / re_constant - 1.0));
    }
    rep.extra["real_part_constant"] = re_constant;
    rep.extra["real_part_spread"] = re_spread;

    const CaseMeta meta{"hyperbolic-inversion-spread", c.tolerance("hyperbolic-inversion-spread", 1e-2), Provenance::Measured};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int id = static_cast<int>(i);
        const std::string inputs = "x=" + fmt_vec(points[i].coords());
        if (!errors[i].empty()) {
            ReportRow row = measure(id, inputs, 0.0, std::numeric_limits<double>::infinity(), meta);
            row.note = errors[i];
            rep.rows.push_back(std::move(row));
            continue;
        }
        ReportRow row = compare(id, inputs, values[i], constant * refs[i], meta, true);
        row.note = "reference is constant * f(x)";
        rep.rows.push_back(std::move(row));
    }
}

using Runner = void (*)(const ExperimentConfig&, ExperimentReport&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table{
        {"forward-const", forward_const},
        {"series-consistency", series_consistency},
        {"cycle-independence", cycle_independence},
        {"calibrate", calibrate_experiment},
        {"invert", invert_experiment},
        {"pde-harmonic", pde_harmonic},
        {"pde-wave", pde_wave},
        {"hyperbolic-forward", hyperbolic_forward_experiment},
        {"hyperbolic-invert", hyperbolic_invert_experiment},
    };
    return table;
}

// ---------------------------------------------------------------- config

int int_value(const json& v, const std::string& key, int lo, int hi) {
    if (!v.is_number_integer()) throw ParseError(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
        throw ParseError(key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(x);
}

void set_key(ExperimentConfig& c, const std::string& key, const json& v) {
    if (key == "experiment") {
        if (!v.is_string()) throw ParseError(key, "expected a string");
        const std::string name = v.get<std::string>();
        if (!runners().contains(name)) throw ParseError(key, "unknown experiment '" + name + "'");
        c.experiment = name;
    } else if (key == "d") {
        c.d = int_value(v, key, 2, 2);
    } else if (key == "degree_max") {
        c.degree_max = int_value(v, key, 0, 16);
    } else if (key == "nodes") {
        if (!v.is_array() || v.size() < 2 || v.size() > 3) {
            throw ParseError(key, "expected [n_polar, n_azimuthal] or [n_polar, n_azimuthal, n_circle]");
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int n = int_value(v[i], key, std::numeric_limits<int>::min(), 4096);
            if (n < 8) throw ParseError(key, "node count " + std::to_string(n) + " below minimum 8");
            c.nodes[i] = n;
        }
    } else if (key == "test_function") {
        if (!v.is_string()) throw ParseError(key, "expected a string");
        const std::string spec = v.get<std::string>();
        try {
            (void)TestFunction::parse(spec, 2);
        } catch (const Error& e) {
            throw ParseError(key, e.what());
        }
        c.test_function = spec;
    } else if (key == "seed") {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
            throw ParseError(key, "expected a non-negative integer");
        }
        c.seed = v.get<std::uint64_t>();
    } else if (key == "output") {
        if (!v.is_string()) throw ParseError(key, "expected a string");
        c.output = v.get<std::string>();
    } else if (key == "cases") {
        c.cases = int_value(v, key, 1, 100000);
    } else if (key.starts_with("tolerance.")) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) throw ParseError(key, "expected a positive number");
        c.tolerances[key.substr(10)] = v.get<double>();
    } else {
        throw ParseError(key, "unknown key");
    }
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{
        "forward-const", "series-consistency", "cycle-independence", "calibrate",         "invert",
        "pde-harmonic",  "pde-wave",           "hyperbolic-forward", "hyperbolic-invert",
    };
    return names;
}

double ExperimentConfig::tolerance(const std::string& invariant, double fallback) const {
    const auto it = tolerances.find(invariant);
    return it == tolerances.end() ? fallback : it->second;
}

json ExperimentConfig::to_json() const {
    json tol = json::object();
    for (const auto& [k, v] : tolerances) tol[k] = v;
    return {{"experiment", experiment}, {"d", d},         {"degree_max", degree_max},
            {"nodes", nodes},           {"test_function", test_function}, {"seed", seed},
            {"output", output},         {"cases", cases}, {"tolerances", tol}};
}

ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("<document>", "expected a JSON object");
    ExperimentConfig c;
    for (const auto& [key, value] : doc.items()) set_key(c, key, value);
    if (c.experiment.empty()) throw ParseError("experiment", "missing");
    return c;
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ParseError(std::string(assignment), "override must look like key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json v = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (v.is_discarded()) v = raw;
    set_key(config, key, v);
}

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::Oracle: return "oracle";
    case Provenance::PaperFormula: return "paper-formula";
    case Provenance::Measured: return "measured";
    }
    return "measured";
}

bool ExperimentReport::all_pass() const { return failures() == 0 && !rows.empty(); }

std::size_t ExperimentReport::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

json ExperimentReport::to_json() const {
    json out;
    out["config"] = config.to_json();
    out["wall_time_s"] = wall_time_s;
    out["all_pass"] = all_pass();
    out["failures"] = failures();
    json list = json::array();
    for (const ReportRow& r : rows) {
        json j{{"case_id", r.case_id},
               {"inputs", r.inputs},
               {"value", {r.value.real(), r.value.imag()}},
               {"abs_err", finite_or_null(r.abs_err)},
               {"rel_err", finite_or_null(r.rel_err)},
               {"error", finite_or_null(r.error)},
               {"tolerance", r.tolerance},
               {"invariant", r.invariant},
               {"provenance", to_string(r.provenance)},
               {"pass", r.pass}};
        j["reference"] = r.reference ? json{r.reference->real(), r.reference->imag()} : json(nullptr);
        if (!r.note.empty()) j["note"] = r.note;
        list.push_back(std::move(j));
    }
    out["rows"] = std::move(list);
    out["extra"] = extra;
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

std::string ExperimentReport::to_csv(bool with_header_comment) const {
    std::ostringstream os;
    if (with_header_comment) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        os << "# " << config.experiment << " generated " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ")
           << " wall_time_s=" << wall_time_s << "\n";
    }
    os << "case_id,inputs,value_re,value_im,ref_re,ref_im,abs_err,rel_err,error,tolerance,invariant,provenance,pass,note\n";
    for (const ReportRow& r : rows) {
        os << r.case_id << ',' << csv_field(r.inputs) << ',' << num(r.value.real()) << ',' << num(r.value.imag()) << ',';
        if (r.reference) {
            os << num(r.reference->real()) << ',' << num(r.reference->imag());
        } else {
            os << ',';
        }
        os << ',' << num(r.abs_err) << ',' << num(r.rel_err) << ',' << num(r.error) << ',' << num(r.tolerance) << ','
           << r.invariant << ',' << to_string(r.provenance) << ',' << (r.pass ? "true" : "false") << ','
           << csv_field(r.note) << '\n';
    }
    return os.str();
}

ExperimentReport run(const ExperimentConfig& config) {
    const auto it = runners().find(config.experiment);
    if (it == runners().end()) {
        throw ParseError("experiment", "unknown experiment '" + config.experiment + "'");
    }
    if (config.d != 2) throw ParseError("d", "experiments are implemented for d = 2");
    ExperimentReport rep;
    rep.config = config;
    const auto start = std::chrono::steady_clock::now();
    it->second(config, rep);
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const ReportRow& a, const ReportRow& b) { return a.case_id < b.case_id; });
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!config.output.empty()) write_report(rep, config.output);
    return rep;
}

void write_report(const ExperimentReport& report, const std::string& path) {
    std::filesystem::path base(path);
    if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
    std::filesystem::path json_path = base, csv_path = base;
    json_path.replace_extension(".json");
    csv_path.replace_extension(".csv");
    std::ofstream js(json_path);
    std::ofstream cs(csv_path);
    if (!js || !cs) throw ArgumentError("cannot write report to " + path);
    js << report.to_json().dump(2) << '\n';
    cs << report.to_csv();
}

} // namespace horocauchy
