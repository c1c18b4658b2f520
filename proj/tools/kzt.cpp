// Command-line front end: character tables, Kloosterman sums, Hecke checks,
// kernel evaluations, lemma verification, density-bound calculation, and
// deterministic grid sweeps.

#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "kzt/density.hpp"
#include "kzt/hecke.hpp"
#include "kzt/kernels.hpp"
#include "kzt/kloosterman.hpp"
#include "kzt/progression.hpp"
#include "kzt/report.hpp"

using namespace kzt;
using arith::cplx;
using arith::i64;
using report::Json;

namespace {

struct Output {
    std::string path;  // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
        } else {
            std::ofstream f(path, std::ios::binary);
            f << text;
        }
    }
};

dirichlet::DirichletCharacter chi_from_spec(i64 q, i64 index) {
    return dirichlet::character_from_index(q, index);
}

// --- char ------------------------------------------------------------------

int cmd_char(i64 q, int parity, const std::string& format, const Output& out) {
    std::optional<int> par;
    if (parity >= 0) par = parity;
    auto chars = dirichlet::enumerate_characters(q, par);
    if (format == "csv") {
        std::string s = "chi,conductor,parity,primitive,d,re,im\n";
        char buf[96];
        for (size_t i = 0; i < chars.size(); ++i) {
            i64 idx = dirichlet::character_index(chars[i]);
            for (i64 d = 0; d < std::max<i64>(q, 1); ++d) {
                cplx v = chars[i](d);
                std::snprintf(buf, sizeof buf, "%lld,%lld,%d,%d,%lld,%.17g,%.17g\n",
                              (long long)idx, (long long)chars[i].conductor(),
                              chars[i].parity(), chars[i].is_primitive() ? 1 : 0, (long long)d,
                              v.real(), v.imag());
                s += buf;
            }
        }
        out.write(s);
    } else {
        Json root = Json::object();
        root.set("schema", "1").set("q", q);
        Json arr = Json::array();
        for (auto& chi : chars) {
            Json c = Json::object();
            c.set("index", dirichlet::character_index(chi))
                .set("conductor", chi.conductor())
                .set("parity", chi.parity())
                .set("primitive", chi.is_primitive());
            Json vals = Json::array();
            for (i64 d = 0; d < std::max<i64>(q, 1); ++d) {
                cplx v = chi(d);
                vals.push(Json::array().push(d).push(v.real()).push(v.imag()));
            }
            c.set("values", std::move(vals));
            arr.push(std::move(c));
        }
        root.set("characters", std::move(arr));
        out.write(root.dump(2));
    }
    return 0;
}

// --- kloosterman -------------------------------------------------------------

int cmd_kloosterman(const std::string& variant, i64 m, i64 n, i64 c, i64 c_from, i64 c_to,
                    i64 a, i64 q, i64 chi_q, i64 chi_index, const Output& out) {
    ksums::VariantSpec spec;
    if (variant == "classical") {
        spec = ksums::VariantSpec::classical();
    } else if (variant == "twisted") {
        spec = ksums::VariantSpec::twisted(chi_from_spec(chi_q, chi_index));
    } else if (variant == "restricted") {
        spec = ksums::VariantSpec::restricted(a, q);
    } else {
        throw std::invalid_argument("unknown variant: " + variant);
    }
    if (c_from > 0 && c_to >= c_from) {
        std::string s = "c,re,im,abs,weil_bound,ratio\n";
        char buf[160];
        for (i64 cc = c_from; cc <= c_to; ++cc) {
            i64 mod = spec.kind == ksums::Variant::classical ? 1 : spec.q;
            if (cc % mod != 0) continue;
            auto r = ksums::evaluate(spec, m, n, cc);
            double wb = ksums::weil_bound(m, n, cc);
            std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n", (long long)cc,
                          r.value.real(), r.value.imag(), std::abs(r.value), wb,
                          std::abs(r.value) / wb);
            s += buf;
        }
        out.write(s);
        return 0;
    }
    auto r = ksums::evaluate(spec, m, n, c);
    char buf[96];
    if (std::fabs(r.value.imag()) < 1e-12)
        std::snprintf(buf, sizeof buf, "%.16g\n", r.value.real());
    else
        std::snprintf(buf, sizeof buf, "%.16g %+.16gi\n", r.value.real(), r.value.imag());
    out.write(buf);
    return 0;
}

// --- hecke -------------------------------------------------------------------

hecke::HeckeSystem system_from_fixture(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open fixture: " + path);
    nlohmann::json j;
    f >> j;
    i64 q1 = j.at("q1").get<i64>();
    dirichlet::DirichletCharacter chi = dirichlet::principal_character(1);
    if (j.contains("chi_spec") && !j["chi_spec"].is_null())
        chi = chi_from_spec(j["chi_spec"].at("q").get<i64>(), j["chi_spec"].at("index").get<i64>());
    std::map<i64, cplx> lam;
    for (auto& [k, v] : j.at("lambda").items())
        lam[std::stoll(k)] = cplx(v.at(0).get<double>(), v.at(1).get<double>());
    return {q1, chi, std::move(lam)};
}

int cmd_hecke(const std::string& fixture, const std::string& check, i64 q2, int depth, i64 p,
              int ell, i64 m, i64 n, const Output& out) {
    auto sys = system_from_fixture(fixture);
    double dev = 0.0;
    bool pass = false;
    if (check == "gram") {
        dev = hecke::gram_check(sys, q2);
        pass = dev <= 1e-9;
    } else if (check == "xi-norm") {
        auto r = hecke::xi_norm(sys, q2, depth);
        dev = std::max(0.0, std::fabs(r.lhs - r.rhs_partial) - r.tail_bound);
        pass = dev <= 1e-9 && r.lhs >= 1.0 - r.tail_bound;
    } else if (check == "abs-power") {
        auto [lhs, rhs] = hecke::abs_power_expand(sys, p, ell);
        dev = std::abs(rhs - cplx(lhs));
        pass = dev <= 1e-9;
    } else if (check == "hecke-mult") {
        cplx lhs = hecke::hecke_value(sys, m) * hecke::hecke_value(sys, n);
        cplx rhs = 0.0;
        i64 g = std::gcd(m, n);
        for (i64 d = 1; d <= g; ++d) {
            if (g % d != 0 || std::gcd(d, sys.level()) != 1) continue;
            rhs += sys.nebentypus()(d) * hecke::hecke_value(sys, m * n / (d * d));
        }
        dev = std::abs(lhs - rhs);
        pass = dev <= 1e-9;
    } else {
        throw std::invalid_argument("unknown check: " + check);
    }
    Json root = Json::object();
    root.set("schema", "1").set("check", check).set("max_deviation", dev).set("pass", pass);
    out.write(root.dump(2));
    return pass ? 0 : 1;
}

// --- kernel ------------------------------------------------------------------

int cmd_kernel(const std::string& name, int kappa, double t, double t_imag, double T, double X,
               double a, double r, double zre, double zim, double x, double abs_tol,
               const std::string& method, const Output& out) {
    quad::QuadratureSpec spec;
    spec.abs_tol = abs_tol;
    spec.rel_tol = abs_tol;
    if (method == "simpson") spec.method = quad::Method::adaptive_simpson;
    else if (method == "gl") spec.method = quad::Method::gauss_legendre_panel;
    else if (method == "de") spec.method = quad::Method::double_exponential;
    else throw std::invalid_argument("unknown method: " + method);

    cplx tval(t, t_imag);
    cplx value;
    double est = 0.0;
    if (name == "h_kT") {
        value = kernels::h_kT_closed(kappa, tval, T);
    } else if (name == "h_kT_integral") {
        auto v = kernels::h_kT_integral(kappa, tval, T, spec);
        value = v.value;
        est = v.est_error;
    } else if (name == "h_X") {
        value = kernels::h_X(tval, X);
    } else if (name == "bessel_k") {
        auto v = kernels::bessel_k_imag(r, cplx(zre, zim), spec);
        value = v.value;
        est = v.est_error;
    } else if (name == "i_kappa") {
        auto v = kernels::i_kappa(kappa, a, r, spec);
        value = v.value;
        est = v.est_error;
    } else if (name == "int_r_i0") {
        auto v = kernels::int_r_i0(a, T, spec);
        Json root = Json::object();
        root.set("schema", "1").set("name", name).set("direct", v.direct)
            .set("single_integral", v.single_integral)
            .set("difference", v.direct - v.single_integral);
        out.write(root.dump(2));
        return 0;
    } else if (name == "int_r_i1") {
        auto v = kernels::int_r_i1(a, T, spec);
        Json root = Json::object();
        root.set("schema", "1").set("name", name).set("direct_im", v.direct.imag())
            .set("two_term_im", v.two_term.imag())
            .set("difference", std::abs(v.direct - v.two_term));
        out.write(root.dump(2));
        return 0;
    } else if (name == "g0_const" || name == "g0_transform") {
        double XX = X;
        auto h = [XX](double rr) { return kernels::h_X(cplx(rr, 0.0), XX).real(); };
        auto v = name == "g0_const" ? kernels::g0_const(h, spec)
                                    : kernels::g0_transform(h, x, spec);
        value = v.value;
        est = v.est_error;
    } else {
        throw std::invalid_argument("unknown kernel: " + name);
    }
    Json root = Json::object();
    root.set("schema", "1").set("name", name).set("re", value.real()).set("im", value.imag())
        .set("est_error", est);
    out.write(root.dump(2));
    return 0;
}

// --- verify-lemma --------------------------------------------------------------

Json report_json(const lemmas::SumReport& r, i64 chi_index) {
    Json params = Json::object();
    params.set("q", r.params.q).set("m", r.params.m).set("n", r.params.n);
    if (r.params.chi) params.set("chi_index", chi_index);
    else params.set("a", r.params.a);
    if (r.sigma > 0.0) params.set("sigma", r.sigma);
    Json root = Json::object();
    root.set("schema", "1")
        .set("lemma", r.lemma)
        .set("params", std::move(params))
        .set("lhs_partial", r.lhs_partial)
        .set("c_max", r.c_max)
        .set("tail_bound", r.tail_bound)
        .set("rhs", r.rhs)
        .set("ratio", r.ratio)
        .set("pass", r.pass);
    return root;
}

int cmd_verify_lemma(const std::string& lemma, i64 q, i64 m, i64 n, i64 a, i64 chi_index,
                     double sigma, i64 c_max, const Output& out) {
    auto dash = lemma.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("lemma should look like g1-csigma");
    std::string vpart = lemma.substr(0, dash), kind = lemma.substr(dash + 1);
    lemmas::LemmaVariant v;
    if (vpart == "g1") v = lemmas::LemmaVariant::g1;
    else if (vpart == "g") v = lemmas::LemmaVariant::g;
    else if (vpart == "g0") v = lemmas::LemmaVariant::g0;
    else throw std::invalid_argument("unknown lemma family: " + vpart);

    lemmas::LemmaParams params;
    params.q = q;
    params.m = m;
    params.n = n;
    params.a = a;
    if (v == lemmas::LemmaVariant::g0) params.chi = chi_from_spec(q, chi_index);

    lemmas::SumReport r;
    if (kind == "cleq") r = lemmas::sum_below(v, params);
    else if (kind == "cgeq") r = lemmas::sum_above(v, params, c_max);
    else if (kind == "csigma") r = lemmas::sum_sigma(v, params, sigma, c_max);
    else throw std::invalid_argument("unknown lemma kind: " + kind);

    out.write(report_json(r, chi_index).dump(2));
    return r.pass ? 0 : 1;
}

// --- bound ----------------------------------------------------------------------

int cmd_bound(const std::string& theorem, const std::string& group, i64 q, double T,
              const std::vector<std::string>& alphas, const std::vector<std::string>& mus,
              double alpha0, double mu0, double eps, i64 chi_index, bool squarefree_improve,
              const std::string& config, const Output& out) {
    density::DensityParams par;
    std::string thm = theorem;
    if (!config.empty()) {
        std::ifstream f(config);
        if (!f) throw std::invalid_argument("cannot open config: " + config);
        nlohmann::json j;
        f >> j;
        thm = j.value("theorem", thm);
        std::string g = j.value("group", group);
        par.group = g == "gamma0" ? arith::Group::Gamma0
                    : g == "gamma" ? arith::Group::GammaFull
                                   : arith::Group::Gamma1;
        par.q = j.value("q", q);
        par.T = j.value("T", T);
        par.eps = j.value("eps", eps);
        par.alpha0 = j.value("alpha0", alpha0);
        par.mu0 = j.value("mu0", mu0);
        par.squarefree_improvement = j.value("squarefree_improvement", squarefree_improve);
        if (j.contains("chi_index")) par.chi = chi_from_spec(par.q, j["chi_index"].get<i64>());
        else if (j.contains("chi") && !j["chi"].is_null())
            par.chi = chi_from_spec(par.q, j["chi"].get<i64>());
        if (j.contains("alphas"))
            for (auto& [k, v] : j["alphas"].items()) {
                double mu = j.contains("mus") && j["mus"].contains(k) ? j["mus"][k].get<double>()
                                                                      : 0.0;
                par.primes.push_back({std::stoll(k), v.get<double>(), mu});
            }
    } else {
        par.group = group == "gamma0" ? arith::Group::Gamma0
                    : group == "gamma" ? arith::Group::GammaFull
                                       : arith::Group::Gamma1;
        par.q = q;
        par.T = T;
        par.eps = eps;
        par.alpha0 = alpha0;
        par.mu0 = mu0;
        par.squarefree_improvement = squarefree_improve;
        if (par.group == arith::Group::Gamma0 && chi_index >= 0)
            par.chi = chi_from_spec(q, chi_index);
        std::map<i64, density::PrimeTerm> terms;
        auto parse_pv = [](const std::string& s) {
            auto colon = s.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("expected p:value, got " + s);
            return std::pair<i64, double>{std::stoll(s.substr(0, colon)),
                                          std::stod(s.substr(colon + 1))};
        };
        for (const auto& s : alphas) {
            auto [p, v] = parse_pv(s);
            terms[p] = {p, v, 0.0};
        }
        for (const auto& s : mus) {
            auto [p, v] = parse_pv(s);
            if (!terms.count(p)) throw std::invalid_argument("mu given without alpha for p");
            terms[p].mu = v;
        }
        for (auto& [p, t] : terms) par.primes.push_back(t);
    }

    density::BoundValue b = thm == "huxley" ? density::huxley_rhs(par) : density::sarnak_rhs(par);
    auto ell = density::ell_choice(
        thm == "huxley" ? density::Theorem::huxley : density::Theorem::sarnak, par);
    Json root = Json::object();
    root.set("schema", "1")
        .set("theorem", thm)
        .set("group", arith::group_name(par.group))
        .set("q", par.q)
        .set("value", b.value)
        .set("vol", b.vol)
        .set("vol_exponent", b.vol_exponent)
        .set("t_exponent", b.t_exponent)
        .set("shift", b.shift)
        .set("qdot", b.qdot)
        .set("qddot", b.qddot)
        .set("min_branch", i64(b.min_branch));
    Json ellj = Json::object();
    for (auto& [p, l] : ell.ell) ellj.set(std::to_string(p), l);
    root.set("ell", std::move(ellj));
    if (thm == "huxley") root.set("X", ell.X);
    Json warn = Json::array();
    for (auto& w : b.warnings) warn.push(w);
    root.set("warnings", std::move(warn));
    out.write(root.dump(2));
    return 0;
}

// --- sweep ------------------------------------------------------------------------

int cmd_sweep(const std::string& config_path, const Output& out) {
    std::ifstream f(config_path);
    if (!f) throw std::invalid_argument("cannot open config: " + config_path);
    nlohmann::json cfg;
    f >> cfg;
    arith::u64 seed = cfg.value("seed", 0ULL);
    std::mt19937_64 rng(seed);
    auto uni = [&rng](double lo, double hi) {
        return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
    };

    Json checks = Json::array();
    i64 total_cells = 0, total_failures = 0;
    for (auto& c : cfg.value("checks", nlohmann::json::array())) {
        std::string name = c.at("name").get<std::string>();
        Json entry = Json::object();
        entry.set("name", name);
        i64 cells = 0, failures = 0;
        double worst = 0.0;
        try {
            if (name == "weil") {
                i64 c_max = c.value("c_max", 2000);
                i64 mn_max = c.value("mn_max", 20);
                lemmas::UnitScratch scratch;
                for (i64 cc = 1; cc <= c_max; ++cc) {
                    scratch.prepare(cc);
                    for (i64 m = 1; m <= mn_max; ++m)
                        for (i64 n = 1; n <= mn_max; ++n) {
                            cplx s = 0.0;
                            if (cc == 1) s = 1.0;
                            else
                                scratch.for_each_unit(cc, [&](i64 d, i64 db) {
                                    s += scratch.root((m % cc * d + n % cc * db) % cc);
                                });
                            double ratio = std::abs(s) / ksums::weil_bound(m, n, cc);
                            ++cells;
                            worst = std::max(worst, ratio);
                            if (ratio > 1.0 + 1e-9) ++failures;
                        }
                }
            } else if (name == "crt") {
                i64 c_max = c.value("c_max", 500);
                for (i64 cc = 2; cc <= c_max; ++cc)
                    for (i64 c1 = 2; c1 * c1 <= cc; ++c1) {
                        if (cc % c1 != 0 || std::gcd(c1, cc / c1) != 1) continue;
                        auto v = ksums::VariantSpec::classical();
                        double dev = std::abs(ksums::crt_split(v, 2, 5, c1, cc / c1).value -
                                              ksums::kloosterman(2, 5, cc).value);
                        ++cells;
                        worst = std::max(worst, dev);
                        if (dev > 1e-10) ++failures;
                    }
            } else if (name == "orthogonality") {
                i64 q_max = c.value("q_max", 30);
                for (i64 q = 1; q <= q_max; ++q)
                    for (i64 cc : {q, 2 * q, q * q})
                        for (int kappa = 0; kappa <= 1; ++kappa)
                            for (i64 a = 1; a <= q; ++a) {
                                if (std::gcd(a % q == 0 ? q : a, q) != 1) continue;
                                auto [lhs, rhs] =
                                    ksums::orthogonality_reduce(a, q, kappa, 1, 2, cc);
                                double dev = std::abs(lhs - rhs);
                                ++cells;
                                worst = std::max(worst, dev);
                                if (dev > 1e-9) ++failures;
                            }
            } else if (name == "gram") {
                i64 count = c.value("count", 20);
                int max_primes = c.value("max_primes", 3);
                int max_exp = c.value("max_exp", 4);
                const i64 plist[5] = {2, 3, 5, 7, 11};
                for (i64 it = 0; it < count; ++it) {
                    int np = 1 + int(rng() % arith::u64(max_primes));
                    i64 q2 = 1;
                    std::map<i64, cplx> lam;
                    for (int i = 0; i < np; ++i) {
                        i64 p = plist[(rng() >> 8) % 5];
                        if (lam.count(p)) continue;
                        int e = 1 + int(rng() % arith::u64(max_exp));
                        for (int j = 0; j < e; ++j) q2 *= p;
                        lam[p] = cplx(uni(-1.9, 1.9), 0.0);
                    }
                    hecke::HeckeSystem sys(1, dirichlet::principal_character(1), lam);
                    double dev = hecke::gram_check(sys, q2);
                    ++cells;
                    worst = std::max(worst, dev);
                    if (dev > 1e-9) ++failures;
                }
            } else if (name == "csigma") {
                lemmas::SigmaGridSpec spec;
                i64 q_max = c.value("q_max", 8);
                for (i64 q = 1; q <= q_max; ++q) spec.qs.push_back(q);
                spec.c_max = c.value("c_max", 4000);
                spec.mn_max = c.value("mn_max", 6);
                auto s = lemmas::run_sigma_grid(spec);
                cells = s.cells;
                failures = s.failures;
                worst = s.max_ratio;
            } else {
                throw std::invalid_argument("unknown check: " + name);
            }
        } catch (const std::exception& e) {
            ++failures;
            entry.set("error", e.what());
        }
        entry.set("cells", cells).set("failures", failures).set("worst", worst);
        checks.push(std::move(entry));
        total_cells += cells;
        total_failures += failures;
    }
    Json root = Json::object();
    root.set("schema", "1")
        .set("seed", i64(seed))
        .set("cells", total_cells)
        .set("failures", total_failures)
        .set("checks", std::move(checks));
    out.write(root.dump(2));
    return total_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kloosterman-sum and Kuznetsov-kernel toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // let --out appear after the subcommand
    Output out;
    app.add_option("--out", out.path, "write output to a file instead of stdout");

    // char
    auto* sc_char = app.add_subcommand("char", "print a Dirichlet character table");
    sc_char->fallthrough();
    i64 char_q = 1;
    int char_parity = -1;
    std::string char_format = "csv";
    sc_char->add_option("--q", char_q, "modulus")->required();
    sc_char->add_option("--parity", char_parity, "restrict to parity 0 (even) or 1 (odd)");
    sc_char->add_option("--format", char_format, "csv or json");

    // kloosterman
    auto* sc_kl = app.add_subcommand("kloosterman", "evaluate Kloosterman sums");
    sc_kl->fallthrough();
    std::string kl_variant = "classical";
    i64 kl_m = 1, kl_n = 1, kl_c = 1, kl_a = 1, kl_q = 1, kl_cq = 1, kl_ci = 0;
    std::string kl_range;
    sc_kl->add_option("--variant", kl_variant, "classical, twisted, restricted");
    sc_kl->add_option("--m", kl_m)->required();
    sc_kl->add_option("--n", kl_n)->required();
    sc_kl->add_option("--c", kl_c, "single modulus");
    sc_kl->add_option("--c-range", kl_range, "range lo:hi, CSV output");
    sc_kl->add_option("--a", kl_a, "restricted: residue class");
    sc_kl->add_option("--q", kl_q, "restricted: class modulus");
    sc_kl->add_option("--chi-q", kl_cq, "twisted: character modulus");
    sc_kl->add_option("--chi-index", kl_ci, "twisted: character index");

    // hecke
    auto* sc_h = app.add_subcommand("hecke", "Hecke-system checks from a JSON fixture");
    sc_h->fallthrough();
    std::string h_fixture, h_check = "gram";
    i64 h_q2 = 1, h_p = 2, h_m = 2, h_n = 3;
    int h_depth = 40, h_ell = 1;
    sc_h->add_option("--fixture", h_fixture, "fixture path")->required();
    sc_h->add_option("--check", h_check, "gram, xi-norm, abs-power, hecke-mult")->required();
    sc_h->add_option("--q2", h_q2);
    sc_h->add_option("--depth", h_depth, "xi-norm truncation depth");
    sc_h->add_option("--p", h_p);
    sc_h->add_option("--ell", h_ell);
    sc_h->add_option("--m", h_m);
    sc_h->add_option("--n", h_n);

    // kernel
    auto* sc_k = app.add_subcommand("kernel", "evaluate kernel functions");
    sc_k->fallthrough();
    std::string k_name;
    int k_kappa = 0;
    double k_t = 0.0, k_ti = 0.0, k_T = 1.0, k_X = 1.0, k_a = 1.0, k_r = 0.0, k_zre = 1.0,
           k_zim = 0.0, k_x = 1.0, k_tol = 1e-9;
    std::string k_method = "simpson";
    sc_k->add_option("--name", k_name,
                     "h_kT, h_kT_integral, h_X, bessel_k, i_kappa, int_r_i0, int_r_i1, "
                     "g0_const, g0_transform")
        ->required();
    sc_k->add_option("--kappa", k_kappa);
    sc_k->add_option("--t", k_t);
    sc_k->add_option("--t-imag", k_ti);
    sc_k->add_option("--T", k_T);
    sc_k->add_option("--X", k_X);
    sc_k->add_option("--a", k_a);
    sc_k->add_option("--r", k_r);
    sc_k->add_option("--zeta-re", k_zre);
    sc_k->add_option("--zeta-im", k_zim);
    sc_k->add_option("--x", k_x);
    sc_k->add_option("--abs-tol", k_tol);
    sc_k->add_option("--method", k_method, "simpson, gl, de");

    // verify-lemma
    auto* sc_v = app.add_subcommand("verify-lemma", "verify a sum-of-Kloosterman-sums lemma");
    sc_v->fallthrough();
    std::string v_lemma;
    i64 v_q = 1, v_m = 1, v_n = 1, v_a = 1, v_ci = 0, v_cmax = 100000;
    double v_sigma = 0.75;
    sc_v->add_option("--lemma", v_lemma,
                     "g1-cleq, g-cleq, g0-cleq, g1-cgeq, g-cgeq, g0-cgeq, g1-csigma, g-csigma, "
                     "g0-csigma")
        ->required();
    sc_v->add_option("--q", v_q)->required();
    sc_v->add_option("--m", v_m)->required();
    sc_v->add_option("--n", v_n)->required();
    sc_v->add_option("--a", v_a);
    sc_v->add_option("--chi-index", v_ci);
    sc_v->add_option("--sigma", v_sigma);
    sc_v->add_option("--c-max", v_cmax);

    // bound
    auto* sc_b = app.add_subcommand("bound", "density-theorem bound calculator");
    sc_b->fallthrough();
    std::string b_theorem = "sarnak", b_group = "gamma1", b_config;
    i64 b_q = 1, b_ci = -1;
    double b_T = 1.0, b_alpha0 = 0.0, b_mu0 = 0.0, b_eps = 1e-3;
    bool b_sf = false;
    std::vector<std::string> b_alphas, b_mus;
    sc_b->add_option("--theorem", b_theorem, "sarnak or huxley");
    sc_b->add_option("--group", b_group, "gamma0, gamma1, gamma");
    sc_b->add_option("--q", b_q);
    sc_b->add_option("--T", b_T);
    sc_b->add_option("--alpha", b_alphas, "p:alpha_p (repeatable)");
    sc_b->add_option("--mu", b_mus, "p:mu_p (repeatable)");
    sc_b->add_option("--alpha0", b_alpha0);
    sc_b->add_option("--mu0", b_mu0);
    sc_b->add_option("--eps", b_eps);
    sc_b->add_option("--chi-index", b_ci, "nebentypus index (gamma0)");
    sc_b->add_flag("--squarefree-improvement", b_sf);
    sc_b->add_option("--config", b_config, "JSON config file");

    // sweep
    auto* sc_s = app.add_subcommand("sweep", "run a deterministic check grid");
    sc_s->fallthrough();
    std::string s_config;
    sc_s->add_option("--config", s_config, "JSON sweep config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sc_char) return cmd_char(char_q, char_parity, char_format, out);
        if (*sc_kl) {
            i64 kl_from = 0, kl_to = 0;
            if (!kl_range.empty()) {
                auto colon = kl_range.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--c-range expects lo:hi");
                kl_from = std::stoll(kl_range.substr(0, colon));
                kl_to = std::stoll(kl_range.substr(colon + 1));
            }
            return cmd_kloosterman(kl_variant, kl_m, kl_n, kl_c, kl_from, kl_to, kl_a, kl_q,
                                   kl_cq, kl_ci, out);
        }
        if (*sc_h) return cmd_hecke(h_fixture, h_check, h_q2, h_depth, h_p, h_ell, h_m, h_n, out);
        if (*sc_k)
            return cmd_kernel(k_name, k_kappa, k_t, k_ti, k_T, k_X, k_a, k_r, k_zre, k_zim, k_x,
                              k_tol, k_method, out);
        if (*sc_v) return cmd_verify_lemma(v_lemma, v_q, v_m, v_n, v_a, v_ci, v_sigma, v_cmax, out);
        if (*sc_b)
            return cmd_bound(b_theorem, b_group, b_q, b_T, b_alphas, b_mus, b_alpha0, b_mu0,
                             b_eps, b_ci, b_sf, b_config, out);
        if (*sc_s) return cmd_sweep(s_config, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
