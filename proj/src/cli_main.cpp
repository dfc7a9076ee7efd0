// antipode: command-line front end for the antipodal cubic family toolkit.
//
// Subcommands expose the exact circle calculus (rot, angle), orbit and
// parameter classification (classify), ray tracing (ray internal|param),
// image rendering (julia, param-plane) and a built-in invariant suite
// (selftest). Every run writes a JSON sidecar with the effective
// configuration so results are reproducible from the outputs alone.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "antipode/angle_calculus.hpp"
#include "antipode/map_dynamics.hpp"
#include "antipode/pl_map.hpp"
#include "antipode/plane_renderer.hpp"
#include "antipode/ray_engine.hpp"
#include "antipode/rotation_set.hpp"

using json = nlohmann::ordered_json;
using namespace antipode;

namespace {

Angle parse_angle(const std::string& s) {
    try {
        return Angle(rat_parse(s));
    } catch (const std::exception& e) {
        throw CLI::ValidationError("angle", "'" + s + "' is not a rational (num/den): " + e.what());
    }
}

Complex parse_complex(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    const auto comma = t.find(',');
    try {
        if (comma == std::string::npos) return Complex(std::stod(t), 0.0);
        return Complex(std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("complex", "'" + s + "' is not re,im");
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json angles_json(const std::vector<Angle>& v) {
    json a = json::array();
    for (const Angle& x : v) a.push_back(x.str());
    return a;
}

// Env var ANTIPODE_THREADS takes precedence over --threads.
int resolve_threads(int flag_value) {
    if (const char* env = std::getenv("ANTIPODE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return flag_value;
}

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << std::endl;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f << j.dump(2) << '\n';
}

// Reproducibility sidecar: one per run, named after the output file when
// there is one, "antipode-run.json" otherwise.
void write_run_sidecar(const std::string& command, const json& config, const std::string& out) {
    json j;
    j["tool"] = "antipode";
    j["command"] = command;
    j["output"] = out.empty() ? "stdout" : out;
    j["config"] = config;
    const std::string path = out.empty() || out == "-" ? "antipode-run.json" : out + ".run.json";
    std::ofstream f(path, std::ios::binary);
    if (f) f << j.dump(2) << '\n';
}

const char* orbit_kind_name(OrbitKind k) {
    switch (k) {
    case OrbitKind::ToZero: return "to-zero";
    case OrbitKind::ToInfinity: return "to-infinity";
    case OrbitKind::AttractingCycle: return "attracting-cycle";
    case OrbitKind::Undecided: return "undecided";
    }
    return "?";
}

json orbit_json(const OrbitClass& oc) {
    json j;
    j["kind"] = orbit_kind_name(oc.kind);
    j["iterations"] = oc.iterations_used;
    if (oc.kind == OrbitKind::AttractingCycle) {
        j["period"] = oc.period;
        j["self_antipodal"] = oc.self_antipodal;
        j["multiplier"] = complex_json(oc.multiplier);
        json cyc = json::array();
        for (const Complex& z : oc.cycle) cyc.push_back(complex_json(z));
        j["cycle"] = cyc;
    }
    return j;
}

Projection parse_projection(const std::string& s) {
    if (s == "plane") return Projection::Plane;
    if (s == "sphere") return Projection::SphereOrthonormal;
    if (s == "disk") return Projection::CircledDisk;
    throw CLI::ValidationError("projection", "'" + s + "' is not plane|sphere|disk");
}

std::array<std::uint8_t, 3> rgb_from_json(const json& a) {
    return {static_cast<std::uint8_t>(a.at(0).get<int>()),
            static_cast<std::uint8_t>(a.at(1).get<int>()),
            static_cast<std::uint8_t>(a.at(2).get<int>())};
}

// Palettes are configuration: any subset of the fields may be overridden
// from a JSON file.
Palette load_palette(const std::string& path) {
    Palette pal;
    if (path.empty()) return pal;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open palette file: " + path);
    const json j = json::parse(f);
    if (j.contains("param"))
        for (std::size_t i = 0; i < pal.param.size() && i < j["param"].size(); ++i)
            pal.param[i] = rgb_from_json(j["param"][i]);
    if (j.contains("julia_zero")) pal.julia_zero = rgb_from_json(j["julia_zero"]);
    if (j.contains("julia_inf")) pal.julia_inf = rgb_from_json(j["julia_inf"]);
    if (j.contains("julia_cycle")) pal.julia_cycle = rgb_from_json(j["julia_cycle"]);
    if (j.contains("julia_undecided")) pal.julia_undecided = rgb_from_json(j["julia_undecided"]);
    if (j.contains("background")) pal.background = rgb_from_json(j["background"]);
    if (j.contains("hue_saturation")) pal.hue_saturation = j["hue_saturation"].get<double>();
    if (j.contains("hue_value")) pal.hue_value = j["hue_value"].get<double>();
    return pal;
}

// Shared raster options for the two render subcommands.
struct RenderOpts {
    int width = 512, height = 512;
    std::string center = "0,0";
    double half_extent = 2.0;
    std::string projection = "plane";
    int budget = 2000;
    double eps = 1e-3;
    int threads = 0;
    std::string palette_file;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--width", width, "image width in pixels");
        cmd->add_option("--height", height, "image height in pixels");
        cmd->add_option("--center", center, "viewport centre as re,im");
        cmd->add_option("--half-extent", half_extent, "half the horizontal span");
        cmd->add_option("--projection", projection, "plane|sphere|disk");
        cmd->add_option("--budget", budget, "iteration budget per pixel");
        cmd->add_option("--eps", eps, "classifier tolerance");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
        cmd->add_option("--palette", palette_file, "JSON palette override file");
    }

    RenderSpec spec() const {
        RenderSpec s;
        s.width = width;
        s.height = height;
        s.center = parse_complex(center);
        s.half_extent = half_extent;
        s.projection = parse_projection(projection);
        s.budget = budget;
        s.eps = eps;
        s.threads = resolve_threads(threads);
        return s;
    }

    json config() const {
        json c;
        c["width"] = width;
        c["height"] = height;
        c["center"] = center;
        c["half_extent"] = half_extent;
        c["projection"] = projection;
        c["budget"] = budget;
        c["eps"] = eps;
        c["threads"] = resolve_threads(threads);
        c["palette"] = palette_file.empty() ? "default" : palette_file;
        return c;
    }
};

// ---------------------------------------------------------------- selftest

int run_selftest(bool quick) {
    using Clock = std::chrono::steady_clock;
    int failures = 0;
    auto check = [&failures](const std::string& name, auto&& fn) {
        const auto t0 = Clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "  [" << static_cast<int>(ms) << " ms]" << std::endl;
        if (!ok) failures++;
    };

    check("exact-values", [](std::string& d) {
        const GapEndpointNumerators g = critical_gap_endpoint_numerators(Angle(BigRat(2, 7)));
        if (g.a_num != 6 || g.b_num != 15 || g.modulus != 26) {
            d = "critical_gap(2/7) endpoints";
            return false;
        }
        const auto p47 = phi_pm(Angle(BigRat(2, 7)), Angle(BigRat(4, 7)));
        const auto p17 = phi_pm(Angle(BigRat(2, 7)), Angle(BigRat(1, 7)));
        if (p47.first != Angle(BigRat(18, 26)) || p47.second != Angle(BigRat(19, 26)) ||
            p17.first != Angle(BigRat(2, 26)) || p17.second != Angle(BigRat(5, 26))) {
            d = "phi_pm values";
            return false;
        }
        const auto b14 = balanced_pair(Angle(BigRat(1, 4)));
        const auto b12 = balanced_pair(Angle(BigRat(1, 2)));
        if (b14.first != Angle(BigRat(2, 15)) || b14.second != Angle(BigRat(4, 15)) ||
            b12.first != Angle(BigRat(1, 3)) || b12.second != Angle(BigRat(2, 3))) {
            d = "balanced pairs";
            return false;
        }
        if (balanced_angle(Angle(BigRat(1, 3))) != Angle(BigRat(2, 7)) ||
            rho_inverse_plus(Angle(BigRat(1, 3))) != Angle(BigRat(2, 7))) {
            d = "balanced/rho-inverse at 1/3";
            return false;
        }
        if (rho_discontinuity(Angle(BigRat(1, 2))) != BigRat(1, 3) ||
            rho_discontinuity(Angle(BigRat(1, 4))) != BigRat(2, 15)) {
            d = "rho discontinuities";
            return false;
        }
        return true;
    });

    check("gap-length-law", [quick](std::string& d) {
        // doubling-periodic angles k/127 have period 7: length 3^6/(3^7-1)
        const BigRat expect(BigInt(729), BigInt(2186));
        const int step = quick ? 11 : 1;
        for (int k = 1; k < 127; k += step) {
            if (critical_gap(Angle(BigRat(k, 127))).length != expect) {
                d = "periodic k/127 length";
                return false;
            }
        }
        // non-periodic rational angles: length exactly 1/3
        std::mt19937 rng(7);
        for (int i = 0; i < (quick ? 10 : 40); ++i) {
            const long den = 2L << (rng() % 10);
            const long num = 1 + static_cast<long>(rng() % (den - 1));
            const Angle th{BigRat(num, den)};
            if (in_lambda(th, th)) continue; // safety: all k/2^j are non-periodic
            if (critical_gap(th).length != BigRat(1, 3)) {
                d = "dyadic length";
                return false;
            }
        }
        return true;
    });

    check("rho-roundtrip", [quick](std::string& d) {
        for (long den = 3; den <= (quick ? 15 : 31); den += 2) {
            for (long num = 1; num < den; ++num) {
                const Angle t{BigRat(num, den)};
                if (dynamic_rotation_number(rho_inverse_plus(t)) != t) {
                    d = "t = " + t.str();
                    return false;
                }
            }
        }
        return true;
    });

    check("goldberg-orbits", [](std::string& d) {
        for (const auto& t : {Angle(BigRat(1, 3)), Angle(BigRat(2, 5)), Angle(BigRat(3, 7))}) {
            const RotationSet X = goldberg_orbit(t);
            const auto r = orbit_rotation_number(X.orbits.at(0), BigInt(2));
            if (!r || *r != t) {
                d = "rotation number at t = " + t.str();
                return false;
            }
        }
        return true;
    });

    check("map-identities", [](std::string& d) {
        std::mt19937 rng(20240824);
        std::uniform_real_distribution<double> U(-3.0, 3.0);
        for (int i = 0; i < 100; ++i) {
            const Complex q(U(rng), U(rng));
            if (std::abs(q) < 0.05) continue;
            const Complex z(U(rng), U(rng));
            // antipodal equivariance, measured chordally
            const Complex lhs = f_eval(q, antipode_of(z));
            const Complex rhs = antipode_of(f_eval(q, z));
            if (chordal_distance(lhs, rhs) > 1e-9) {
                d = "equivariance";
                return false;
            }
            const auto [c0, cinf] = critical_points(q);
            if (std::abs(f_prime(q, c0)) > 1e-8 * (1.0 + std::abs(q))) {
                d = "critical point";
                return false;
            }
            const FixedPoints fp = fixed_points(q);
            for (const Complex& z0 : {fp.plus, fp.minus}) {
                if (std::abs(f_eval(q, z0) - z0) > 1e-8 * (1.0 + std::abs(z0))) {
                    d = "fixed point residual";
                    return false;
                }
                if (std::abs(f_prime(q, z0)) <= 1.0) {
                    d = "fixed point not repelling";
                    return false;
                }
            }
        }
        return true;
    });

    check("boettcher", [](std::string& d) {
        const Complex q(0.814955, 1.110246); // central parameter (2/7 mid-ray)
        for (int k = 0; k < 12; ++k) {
            const Complex z = std::polar(0.05, 0.5236 * k);
            const Complex lhs = boettcher(q, f_eval(q, z));
            const Complex rhs = boettcher(q, z);
            if (std::abs(lhs - rhs * rhs) > 1e-10) {
                d = "functional equation";
                return false;
            }
        }
        return true;
    });

    check("render-determinism", [](std::string& d) {
        RenderSpec s;
        s.width = s.height = 48;
        s.half_extent = 2.5;
        s.budget = 400;
        s.threads = 3;
        const PlaneImage a = render_julia(Complex(1.0, -6.0), s);
        s.threads = 1;
        const PlaneImage b = render_julia(Complex(1.0, -6.0), s);
        for (std::size_t i = 0; i < a.pixels.size(); ++i) {
            if (a.pixels[i].cls != b.pixels[i].cls || a.pixels[i].hue != b.pixels[i].hue) {
                d = "thread dependence";
                return false;
            }
        }
        return true;
    });

    check("param-symmetry", [](std::string& d) {
        RenderSpec s;
        s.width = s.height = 33;
        s.half_extent = 3.0;
        s.budget = 400;
        s.threads = 2;
        const PlaneImage img = render_param(ParamPlane::Q, ParamColoring::ComponentType, s);
        for (int py = 0; py < s.height; ++py)
            for (int px = 0; px < s.width; ++px)
                if (img.at(px, py).cls != img.at(s.width - 1 - px, s.height - 1 - py).cls) {
                    d = "180-degree symmetry";
                    return false;
                }
        return true;
    });

    std::cout << (failures == 0 ? "selftest: all checks passed"
                                : "selftest: " + std::to_string(failures) + " check(s) FAILED")
              << std::endl;
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"antipodal cubic rational maps: rotation sets, rays, renders"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ------------------------------------------------------------- rot
    auto* rot = app.add_subcommand("rot", "rotation set with a given rotation number");
    auto rot_t = std::make_shared<std::string>();
    auto rot_deg = std::make_shared<int>(2);
    auto rot_out = std::make_shared<std::string>();
    rot->add_option("t", *rot_t, "rotation number (num/den)")->required();
    rot->add_option("--degree", *rot_deg, "circle map degree (2 or 3)")->check(CLI::Range(2, 3));
    rot->add_option("--out", *rot_out, "output file (default stdout)");
    rot->callback([=]() {
        const Angle t = parse_angle(*rot_t);
        json j;
        j["t"] = t.str();
        j["degree"] = *rot_deg;
        if (*rot_deg == 2) {
            const RotationSet X = goldberg_orbit(t);
            j["rotation_number"] = X.rotation_number.str();
            j["orbit"] = angles_json(X.orbits.at(0));
            const auto [gmin, gmax] = gap_length_extremes(t);
            j["gap_min"] = rat_to_string(gmin);
            j["gap_max"] = rat_to_string(gmax);
            j["plateau_length"] = rat_to_string(plateau_length(t));
        } else {
            const auto orbits = rotation_orbits_with_number(t, BigInt(3));
            json arr = json::array();
            for (const auto& o : orbits) {
                RotationSet X = make_rotation_set(BigInt(3), {o});
                json e;
                e["orbit"] = angles_json(o);
                e["deployment"] = deployment_sequence(X).counts;
                arr.push_back(e);
            }
            j["rotation_number"] = t.str();
            j["orbits"] = arr;
        }
        emit(j, *rot_out);
        write_run_sidecar("rot", {{"t", *rot_t}, {"degree", *rot_deg}}, *rot_out);
    });

    // ------------------------------------------------------------- angle
    auto* angle = app.add_subcommand("angle", "doubling/tripling angle calculus");
    angle->require_subcommand(1);

    auto ang_arg1 = std::make_shared<std::string>();
    auto ang_arg2 = std::make_shared<std::string>();
    auto ang_out = std::make_shared<std::string>();

    auto* gap = angle->add_subcommand("gap", "critical gap of a parameter angle");
    gap->add_option("theta", *ang_arg1, "parameter angle (num/den)")->required();
    gap->add_option("--out", *ang_out, "output file (default stdout)");
    gap->callback([=]() {
        const Angle th = parse_angle(*ang_arg1);
        json j;
        j["theta"] = th.str();
        if (in_lambda(th, th)) {
            // doubling-periodic angle: report endpoints over the common
            // denominator 3^p - 1 (the natural unreduced form)
            const GapEndpointNumerators g = critical_gap_endpoint_numerators(th);
            const std::string mod = g.modulus.str();
            j["a"] = g.a_num.str() + "/" + mod;
            j["b"] = g.b_num.str() + "/" + mod;
            j["length"] = (g.b_num - g.a_num).str() + "/" + mod;
            j["period"] = g.period;
        } else {
            const CriticalGap g = critical_gap(th);
            j["a"] = g.a.str();
            j["b"] = g.b.str();
            j["length"] = rat_to_string(g.length);
        }
        emit(j, *ang_out);
        write_run_sidecar("angle gap", {{"theta", *ang_arg1}}, *ang_out);
    });

    auto* rho = angle->add_subcommand("rho", "dynamic rotation number of a parameter angle");
    rho->add_option("theta", *ang_arg1)->required();
    rho->add_option("--out", *ang_out);
    rho->callback([=]() {
        const Angle th = parse_angle(*ang_arg1);
        json j;
        j["theta"] = th.str();
        j["rho"] = dynamic_rotation_number(th).str();
        emit(j, *ang_out);
        write_run_sidecar("angle rho", {{"theta", *ang_arg1}}, *ang_out);
    });

    auto* rhoinv = angle->add_subcommand("rho-inv", "right-continuous inverse of rho");
    rhoinv->add_option("t", *ang_arg1)->required();
    rhoinv->add_option("--out", *ang_out);
    rhoinv->callback([=]() {
        const Angle t = parse_angle(*ang_arg1);
        json j;
        j["t"] = t.str();
        j["theta"] = rho_inverse_plus(t).str();
        j["jump"] = rat_to_string(rho_discontinuity(t));
        emit(j, *ang_out);
        write_run_sidecar("angle rho-inv", {{"t", *ang_arg1}}, *ang_out);
    });

    auto* balanced = angle->add_subcommand("balanced", "balanced angle(s) for a rotation number");
    balanced->add_option("t", *ang_arg1)->required();
    balanced->add_option("--out", *ang_out);
    balanced->callback([=]() {
        const Angle t = parse_angle(*ang_arg1);
        json j;
        j["t"] = t.str();
        if (t.den() % 2 == 0) {
            const auto [a, b] = balanced_pair(t);
            j["a"] = a.str();
            j["b"] = b.str();
        } else {
            j["theta"] = balanced_angle(t).str();
        }
        emit(j, *ang_out);
        write_run_sidecar("angle balanced", {{"t", *ang_arg1}}, *ang_out);
    });

    auto* phic = angle->add_subcommand("phi", "base-3 landing coordinate of a dynamic angle");
    phic->add_option("theta_c", *ang_arg1, "parameter angle")->required();
    phic->add_option("theta", *ang_arg2, "dynamic angle")->required();
    phic->add_option("--out", *ang_out);
    phic->callback([=]() {
        const Angle thc = parse_angle(*ang_arg1);
        const Angle th = parse_angle(*ang_arg2);
        json j;
        j["theta_c"] = thc.str();
        j["theta"] = th.str();
        if (in_lambda(thc, th)) {
            j["x"] = phi(thc, th).str();
        } else {
            const auto [xm, xp] = phi_pm(thc, th);
            j["x_minus"] = xm.str();
            j["x_plus"] = xp.str();
        }
        emit(j, *ang_out);
        write_run_sidecar("angle phi", {{"theta_c", *ang_arg1}, {"theta", *ang_arg2}}, *ang_out);
    });

    auto* psic = angle->add_subcommand("psi", "inverse landing coordinate");
    psic->add_option("theta_c", *ang_arg1, "parameter angle")->required();
    psic->add_option("x", *ang_arg2, "base-3 coordinate")->required();
    psic->add_option("--out", *ang_out);
    psic->callback([=]() {
        const Angle thc = parse_angle(*ang_arg1);
        const Angle x = parse_angle(*ang_arg2);
        json j;
        j["theta_c"] = thc.str();
        j["x"] = x.str();
        j["theta"] = psi(thc, x).str();
        j["visible"] = visible(thc, x);
        emit(j, *ang_out);
        write_run_sidecar("angle psi", {{"theta_c", *ang_arg1}, {"x", *ang_arg2}}, *ang_out);
    });

    auto* rg = angle->add_subcommand("rho-graph", "sample the monotone staircase theta -> rho");
    auto rg_den = std::make_shared<long>(255);
    rg->add_option("--den", *rg_den, "sample all angles k/den")->check(CLI::PositiveNumber);
    rg->add_option("--out", *ang_out, "CSV output file (default stdout)");
    rg->callback([=]() {
        std::ostringstream csv;
        csv << "theta,rho,theta_real,rho_real\n";
        for (long k = 0; k < *rg_den; ++k) {
            const Angle th{BigRat(k, *rg_den)};
            const Angle r = dynamic_rotation_number(th);
            csv << th.str() << ',' << r.str() << ',' << th.to_double() << ',' << r.to_double()
                << '\n';
        }
        if (ang_out->empty() || *ang_out == "-") {
            std::cout << csv.str();
        } else {
            std::ofstream f(*ang_out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file: " + *ang_out);
            f << csv.str();
        }
        write_run_sidecar("angle rho-graph", {{"den", *rg_den}}, *ang_out);
    });

    // ------------------------------------------------------------- classify
    auto* classify = app.add_subcommand("classify", "classify a parameter or a single orbit");
    auto cl_q = std::make_shared<std::string>();
    auto cl_z = std::make_shared<std::string>();
    auto cl_budget = std::make_shared<int>(2000);
    auto cl_eps = std::make_shared<double>(1e-3);
    auto cl_out = std::make_shared<std::string>();
    classify->add_option("--q", *cl_q, "parameter as re,im")->required();
    classify->add_option("--z", *cl_z, "also classify the orbit of this seed");
    classify->add_option("--budget", *cl_budget, "iteration budget");
    classify->add_option("--eps", *cl_eps, "tolerance");
    classify->add_option("--out", *cl_out);
    classify->callback([=]() {
        const Complex q = parse_complex(*cl_q);
        json j;
        j["q"] = complex_json(q);
        const ParamVerdict v = classify_parameter(q, *cl_budget, *cl_eps);
        j["kind"] = param_class_name(v.kind);
        j["critical_orbit"] = orbit_json(v.critical_orbit);
        j["max_excursion"] = v.max_excursion;
        if (const auto hue = estimate_rotation_hue(q, *cl_budget)) j["rotation_hue"] = *hue;
        if (!cl_z->empty()) j["orbit"] = orbit_json(classify_orbit(q, parse_complex(*cl_z),
                                                                   *cl_budget, *cl_eps));
        emit(j, *cl_out);
        write_run_sidecar("classify",
                          {{"q", *cl_q}, {"z", *cl_z}, {"budget", *cl_budget}, {"eps", *cl_eps}},
                          *cl_out);
    });

    // ------------------------------------------------------------- ray
    auto* ray = app.add_subcommand("ray", "trace dynamical or parameter rays");
    ray->require_subcommand(1);

    auto* rint = ray->add_subcommand("internal", "internal ray in the basin of zero");
    auto ri_q = std::make_shared<std::string>();
    auto ri_theta = std::make_shared<std::string>();
    auto ri_depth = std::make_shared<int>(40);
    auto ri_sub = std::make_shared<int>(8);
    auto ri_ext = std::make_shared<bool>(false);
    auto ri_out = std::make_shared<std::string>();
    rint->add_option("--q", *ri_q, "parameter as re,im")->required();
    rint->add_option("--theta", *ri_theta, "ray angle (num/den)")->required();
    rint->add_option("--depth", *ri_depth, "potential-doubling levels");
    rint->add_option("--sublevels", *ri_sub, "samples per level");
    rint->add_flag("--external", *ri_ext, "trace the antipodal external ray instead");
    rint->add_option("--out", *ri_out, "CSV trace file (k,re,im,potential)");
    rint->callback([=]() {
        const Complex q = parse_complex(*ri_q);
        const Angle th = parse_angle(*ri_theta);
        const RayTrace tr = *ri_ext ? external_ray(q, th, *ri_depth, *ri_sub)
                                    : internal_ray(q, th, *ri_depth, *ri_sub);
        if (!ri_out->empty()) {
            std::ofstream f(*ri_out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file: " + *ri_out);
            f << "k,re,im,potential\n";
            for (std::size_t k = 0; k < tr.points.size(); ++k) {
                f << k << ',' << tr.points[k].real() << ',' << tr.points[k].imag() << ','
                  << tr.potentials[k] << '\n';
            }
        }
        json j;
        j["theta"] = th.str();
        j["samples"] = tr.points.size();
        j["landed"] = tr.landed;
        if (tr.landed) j["landing_point"] = complex_json(tr.landing_point);
        j["bifurcated"] = tr.bifurcated;
        j["closest_critical_approach"] = tr.closest_critical_approach;
        emit(j, "");
        write_run_sidecar("ray internal",
                          {{"q", *ri_q},
                           {"theta", *ri_theta},
                           {"depth", *ri_depth},
                           {"sublevels", *ri_sub},
                           {"external", *ri_ext}},
                          *ri_out);
    });

    auto* rpar = ray->add_subcommand("param", "parameter ray in the q^2-plane");
    auto rp_theta = std::make_shared<std::string>();
    auto rp_levels = std::make_shared<std::string>("0.1,0.3,0.5");
    auto rp_target = std::make_shared<double>(0.0);
    auto rp_maxlvl = std::make_shared<int>(12000);
    auto rp_out = std::make_shared<std::string>();
    rpar->add_option("--theta", *rp_theta, "parameter angle (num/den)")->required();
    rpar->add_option("--levels", *rp_levels, "comma list of Boettcher radii to visit");
    rpar->add_option("--escape", *rp_target,
                     "follow the ray until |q^2| exceeds this value (overrides --levels)");
    rpar->add_option("--max-level", *rp_maxlvl, "rung ladder cap for --escape");
    rpar->add_option("--out", *rp_out, "CSV file (level,sigma,q_re,q_im,q2_re,q2_im)");
    rpar->callback([=]() {
        const Angle th = parse_angle(*rp_theta);
        std::vector<ParamRayPoint> pts;
        json j;
        j["theta"] = th.str();
        if (*rp_target > 0.0) {
            const ParamRayResult res = parameter_ray_escape(th, *rp_target, *rp_maxlvl);
            pts = res.points;
            j["escaped"] = res.escaped;
            j["diagnostics"] = res.diagnostics;
        } else {
            std::vector<double> radii;
            std::stringstream ss(*rp_levels);
            std::string tok;
            while (std::getline(ss, tok, ',')) radii.push_back(std::stod(tok));
            pts = parameter_ray(th, radii);
        }
        j["points"] = pts.size();
        if (!pts.empty()) {
            j["q_last"] = complex_json(pts.back().q);
            j["q2_last"] = complex_json(pts.back().q_squared);
            j["q2_abs_last"] = std::abs(pts.back().q_squared);
        }
        if (!rp_out->empty()) {
            std::ofstream f(*rp_out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file: " + *rp_out);
            f << "level,sigma,q_re,q_im,q2_re,q2_im\n";
            for (const ParamRayPoint& p : pts) {
                f << p.level << ',' << p.sigma << ',' << p.q.real() << ',' << p.q.imag() << ','
                  << p.q_squared.real() << ',' << p.q_squared.imag() << '\n';
            }
        }
        emit(j, "");
        write_run_sidecar("ray param",
                          {{"theta", *rp_theta},
                           {"levels", *rp_levels},
                           {"escape", *rp_target},
                           {"max_level", *rp_maxlvl}},
                          *rp_out);
    });

    // ------------------------------------------------------------- julia
    auto* julia = app.add_subcommand("julia", "render a dynamical plane");
    auto ju_q = std::make_shared<std::string>();
    auto ju_opts = std::make_shared<RenderOpts>();
    ju_opts->out = "julia.ppm";
    julia->add_option("--q", *ju_q, "parameter as re,im")->required();
    ju_opts->attach(julia);
    julia->add_option("--out", ju_opts->out, "PPM output path");
    julia->callback([=]() {
        const Complex q = parse_complex(*ju_q);
        const PlaneImage img = render_julia(q, ju_opts->spec());
        write_ppm(img, load_palette(ju_opts->palette_file), ju_opts->out);
        json cfg = ju_opts->config();
        cfg["q"] = *ju_q;
        write_run_sidecar("julia", cfg, ju_opts->out);
    });

    // ------------------------------------------------------------- param-plane
    auto* pplane = app.add_subcommand("param-plane", "render the parameter plane");
    auto pp_plane = std::make_shared<std::string>("q");
    auto pp_coloring = std::make_shared<std::string>("component");
    auto pp_opts = std::make_shared<RenderOpts>();
    pp_opts->out = "param-plane.ppm";
    pp_opts->half_extent = 8.0;
    pplane->add_option("--plane", *pp_plane, "q|q2 (q2 = quotient by the sign flip)");
    pplane->add_option("--coloring", *pp_coloring, "component|rotation");
    pp_opts->attach(pplane);
    pplane->add_option("--out", pp_opts->out, "PPM output path");
    pplane->callback([=]() {
        ParamPlane plane;
        if (*pp_plane == "q") plane = ParamPlane::Q;
        else if (*pp_plane == "q2") plane = ParamPlane::QSquared;
        else throw CLI::ValidationError("plane", "'" + *pp_plane + "' is not q|q2");
        ParamColoring coloring;
        if (*pp_coloring == "component") coloring = ParamColoring::ComponentType;
        else if (*pp_coloring == "rotation") coloring = ParamColoring::RotationNumber;
        else throw CLI::ValidationError("coloring", "'" + *pp_coloring + "' is not component|rotation");
        const PlaneImage img = render_param(plane, coloring, pp_opts->spec());
        write_ppm(img, load_palette(pp_opts->palette_file), pp_opts->out);
        json cfg = pp_opts->config();
        cfg["plane"] = *pp_plane;
        cfg["coloring"] = *pp_coloring;
        write_run_sidecar("param-plane", cfg, pp_opts->out);
    });

    // ------------------------------------------------------------- selftest
    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
    auto st_quick = std::make_shared<bool>(false);
    selftest->add_flag("--quick", *st_quick, "smaller sample sizes");
    selftest->callback([=, &exit_code]() {
        exit_code = run_selftest(*st_quick);
        write_run_sidecar("selftest", {{"quick", *st_quick}}, "");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e); // usage text + nonzero for unknown flags
    } catch (const std::exception& e) {
        std::cerr << "antipode: error: " << e.what() << std::endl;
        return 1;
    }
    return exit_code;
}
