#pragma once

// Grid engine for the explicit-constant lemma sweep. One pass over the units
// of each modulus c is bucketed by residue class mod q, so every class a,
// every twist chi, and every (m, n) pair in the grid reads off the same pass.
// Work is striped statically over threads and merged in a fixed order, so the
// floating-point results do not depend on scheduling.

#include <thread>

#include "kzt/lemmas.hpp"

namespace kzt::lemmas {

struct SigmaGridSpec {
    std::vector<i64> qs;  // default 1..30
    std::vector<double> sigmas{0.55, 0.6, 0.75, 0.9};
    i64 mn_max = 10;
    i64 c_max = 100000;
    int threads = 0;  // 0: KZT_THREADS or hardware count
};

struct SigmaGridSummary {
    i64 cells = 0;
    i64 failures = 0;
    double max_ratio = 0.0;
    std::vector<std::string> failed_cells;
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("KZT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

namespace detail {

struct PairInfo {
    i64 m, n, k;  // k = m n
    int kidx;
    bool coprime_to_q;
};

struct QAccum {
    std::vector<double> g1, g2, g0;  // [pair][class or chi][sigma], flattened
    void init(size_t np, size_t nu, size_t nc, size_t ns) {
        g1.assign(np * nu * ns, 0.0);
        g2.assign(np * nu * ns, 0.0);
        g0.assign(np * nc * ns, 0.0);
    }
    void add(const QAccum& o) {
        for (size_t i = 0; i < g1.size(); ++i) g1[i] += o.g1[i];
        for (size_t i = 0; i < g2.size(); ++i) g2[i] += o.g2[i];
        for (size_t i = 0; i < g0.size(); ++i) g0[i] += o.g0[i];
    }
};

struct GridContext {
    i64 q;
    std::vector<PairInfo> pairs;
    std::vector<i64> kvals;
    std::vector<i64> gap_vals;   // distinct ascending-k gaps
    std::vector<int> gap_id;     // per k position
    std::vector<i64> units_q;
    std::vector<int> unit_index;
    std::vector<i64> unit_inv;   // inverse class per unit index
    std::vector<int> neg_index;  // class index of -b
    i64 max_gap = 0;
    std::vector<int> gap_slot;   // gap value -> slot in gap_vals (or 0)
    std::vector<std::vector<cplx>> chi_tab;
    std::vector<int> chi_conj;
    std::vector<double> sigmas;
};

// single-term sums at c = 2: e((1 + k)/2)
inline cplx scratch_root_c2(i64 k) { return (1 + k) % 2 == 0 ? cplx(1.0) : cplx(-1.0); }

inline void grid_process_c(const GridContext& G, i64 c, UnitScratch& scratch, QAccum& acc) {
    const i64 q = G.q;
    const size_t nk = G.kvals.size(), nu = G.units_q.size(), ns = G.sigmas.size();
    const size_t nchi = G.chi_tab.size();

    static thread_local std::vector<cplx> bucket;
    bucket.assign(nk * nu, cplx(0.0));
    static thread_local std::vector<cplx> bad;
    static thread_local std::vector<int> bad_ids;
    bad_ids.clear();
    for (size_t pi = 0; pi < G.pairs.size(); ++pi)
        if (std::gcd(G.pairs[pi].m, c) != 1 && std::gcd(G.pairs[pi].n, c) != 1)
            bad_ids.push_back(int(pi));
    bad.assign(bad_ids.size() * nu, cplx(0.0));

    if (c == 1) {
        for (size_t j = 0; j < nk; ++j) bucket[j] = 1.0;
        for (size_t bi = 0; bi < bad_ids.size(); ++bi) bad[bi * nu] = 1.0;
    } else if (c == 2) {
        size_t b1 = size_t(G.unit_index[1 % q]);
        for (size_t j = 0; j < nk; ++j) bucket[b1 * nk + j] = scratch_root_c2(G.kvals[j]);
        for (size_t bi = 0; bi < bad_ids.size(); ++bi) {
            const auto& pr = G.pairs[size_t(bad_ids[bi])];
            bad[bi * nu + b1] = scratch_root_c2(pr.m + pr.n);
        }
    } else if (q == 1) {
        // single class and real sums: accumulate cosines over the half pass
        scratch.prepare_half(c, true);
        const auto& units = scratch.units();
        const auto& invs = scratch.inverses();
        i64 gstep[16];
        static thread_local std::vector<double> rrow, rbad;
        rrow.assign(nk, 0.0);
        rbad.assign(bad_ids.size(), 0.0);
        for (size_t ui = 0; ui < units.size(); ++ui) {
            const i64 d = units[ui], db = invs[ui];
            i64 mult = 0;
            for (i64 g = 1; g <= G.max_gap; ++g) {
                mult += db;
                if (mult >= c) mult -= c;
                gstep[size_t(G.gap_slot[size_t(g)])] = mult;
            }
            i64 u = d;
            for (size_t j = 0; j < nk; ++j) {
                u += gstep[G.gap_id[j]];
                if (u >= c) u -= c;
                rrow[j] += scratch.root_re(u);
            }
            for (size_t bi = 0; bi < bad_ids.size(); ++bi) {
                const auto& pr = G.pairs[size_t(bad_ids[bi])];
                i64 idx = i64((arith::u128(pr.m % c) * arith::u64(d) +
                               arith::u128(pr.n % c) * arith::u64(db)) %
                              arith::u64(c));
                rbad[bi] += scratch.root_re(idx);
            }
        }
        for (size_t j = 0; j < nk; ++j) bucket[j] = 2.0 * rrow[j];
        for (size_t bi = 0; bi < bad_ids.size(); ++bi) bad[bi] = 2.0 * rbad[bi];
    } else {
        scratch.prepare_half(c);
        const auto& units = scratch.units();
        const auto& invs = scratch.inverses();
        i64 gstep[16];

        // half-pass accumulation; the d <-> c-d mirror is folded in afterwards
        for (size_t ui = 0; ui < units.size(); ++ui) {
            const i64 d = units[ui], db = invs[ui];
            const int b = G.unit_index[size_t(d % q)];
            i64 mult = 0;
            for (i64 g = 1; g <= G.max_gap; ++g) {
                mult += db;
                if (mult >= c) mult -= c;
                gstep[size_t(G.gap_slot[size_t(g)])] = mult;
            }
            i64 u = d;
            cplx* row = bucket.data() + size_t(b) * nk;
            for (size_t j = 0; j < nk; ++j) {
                u += gstep[G.gap_id[j]];
                if (u >= c) u -= c;
                row[j] += scratch.root(u);
            }
            for (size_t bi = 0; bi < bad_ids.size(); ++bi) {
                const auto& pr = G.pairs[size_t(bad_ids[bi])];
                i64 idx = i64((arith::u128(pr.m % c) * arith::u64(d) +
                               arith::u128(pr.n % c) * arith::u64(db)) %
                              arith::u64(c));
                bad[bi * nu + size_t(b)] += scratch.root(idx);
            }
        }
        static thread_local std::vector<cplx> tmp;
        tmp.assign(nk * nu, cplx(0.0));
        for (size_t bi = 0; bi < nu; ++bi) {
            const cplx* row = bucket.data() + bi * nk;
            const cplx* rowneg = bucket.data() + size_t(G.neg_index[bi]) * nk;
            cplx* dst = tmp.data() + bi * nk;
            for (size_t j = 0; j < nk; ++j) dst[j] = row[j] + std::conj(rowneg[j]);
        }
        std::swap(bucket, tmp);
        static thread_local std::vector<cplx> tmpb;
        tmpb.assign(nu, cplx(0.0));
        for (size_t sl = 0; sl < bad_ids.size(); ++sl) {
            cplx* row = bad.data() + sl * nu;
            for (size_t bi = 0; bi < nu; ++bi)
                tmpb[bi] = row[bi] + std::conj(row[size_t(G.neg_index[bi])]);
            std::copy(tmpb.begin(), tmpb.end(), row);
        }
    }

    static thread_local std::vector<double> wsig;
    wsig.assign(ns, 0.0);
    for (size_t s = 0; s < ns; ++s) wsig[s] = std::pow(double(c), -(1.0 + G.sigmas[s]));
    const bool in_q2 = c % (q * q) == 0;

    static thread_local std::vector<cplx> row_s, chi_s;
    row_s.assign(nu, cplx(0.0));
    chi_s.assign(nchi, cplx(0.0));

    for (size_t pi = 0; pi < G.pairs.size(); ++pi) {
        const auto& pr = G.pairs[pi];
        const bool m_unit = std::gcd(pr.m, c) == 1;
        const bool n_unit = std::gcd(pr.n, c) == 1;
        bool conj_transform = false;
        if (m_unit) {
            for (size_t bi = 0; bi < nu; ++bi)
                row_s[bi] =
                    bucket[size_t(G.unit_index[size_t(pr.m % q * G.units_q[bi] % q)]) * nk +
                           size_t(pr.kidx)];
        } else if (n_unit) {
            // S_{a}(m,n;c) = S_{abar}(n,m;c), then shift by the unit n
            for (size_t bi = 0; bi < nu; ++bi) {
                i64 abar = G.units_q[size_t(G.unit_inv[bi])];
                row_s[bi] =
                    bucket[size_t(G.unit_index[size_t(pr.n % q * abar % q)]) * nk +
                           size_t(pr.kidx)];
            }
            conj_transform = true;
        } else {
            int slot = int(std::lower_bound(bad_ids.begin(), bad_ids.end(), int(pi)) -
                           bad_ids.begin());
            const cplx* src = bad.data() + size_t(slot) * nu;
            for (size_t bi = 0; bi < nu; ++bi) row_s[bi] = src[bi];
        }

        for (size_t bi = 0; bi < nu; ++bi) {
            double w = std::abs(row_s[bi]);
            double* dst = acc.g1.data() + (pi * nu + bi) * ns;
            for (size_t s = 0; s < ns; ++s) dst[s] += w * wsig[s];
            if (in_q2) {
                double* dst2 = acc.g2.data() + (pi * nu + bi) * ns;
                for (size_t s = 0; s < ns; ++s) dst2[s] += w * wsig[s];
            }
        }

        if (pr.coprime_to_q && nchi > 0) {
            for (size_t ci = 0; ci < nchi; ++ci) {
                cplx t = 0.0;
                const auto& tab = G.chi_tab[ci];
                for (size_t bi = 0; bi < nu; ++bi) t += tab[bi] * row_s[bi];
                chi_s[ci] = t;
            }
            for (size_t ci = 0; ci < nchi; ++ci) {
                // the d -> dbar step swaps chi for its conjugate
                double w = std::abs(conj_transform ? chi_s[size_t(G.chi_conj[ci])] : chi_s[ci]);
                double* dst = acc.g0.data() + (pi * nchi + ci) * ns;
                for (size_t s = 0; s < ns; ++s) dst[s] += w * wsig[s];
            }
        }
    }
}

inline GridContext make_grid_context(i64 q, const SigmaGridSpec& spec) {
    GridContext G;
    G.q = q;
    G.sigmas = spec.sigmas;
    for (i64 m = 1; m <= spec.mn_max; ++m)
        for (i64 n = m; n <= spec.mn_max; ++n) {
            if (std::gcd(m, n) != 1) continue;
            G.pairs.push_back({m, n, m * n, 0, std::gcd(m * n, q) == 1});
        }
    for (auto& p : G.pairs) G.kvals.push_back(p.k);
    std::sort(G.kvals.begin(), G.kvals.end());
    G.kvals.erase(std::unique(G.kvals.begin(), G.kvals.end()), G.kvals.end());
    for (auto& p : G.pairs)
        p.kidx = int(std::lower_bound(G.kvals.begin(), G.kvals.end(), p.k) - G.kvals.begin());
    i64 prev = 0;
    for (i64 k : G.kvals) {
        i64 gap = k - prev;
        prev = k;
        auto it = std::find(G.gap_vals.begin(), G.gap_vals.end(), gap);
        if (it == G.gap_vals.end()) {
            G.gap_vals.push_back(gap);
            it = G.gap_vals.end() - 1;
        }
        G.gap_id.push_back(int(it - G.gap_vals.begin()));
    }
    if (G.gap_vals.size() > 16) throw std::logic_error("grid: too many distinct gaps");
    for (i64 g : G.gap_vals) G.max_gap = std::max(G.max_gap, g);
    if (G.max_gap > 64) throw std::logic_error("grid: gap chain too long");
    G.gap_slot.assign(size_t(G.max_gap) + 1, 0);
    for (size_t gi = 0; gi < G.gap_vals.size(); ++gi)
        G.gap_slot[size_t(G.gap_vals[gi])] = int(gi);

    G.unit_index.assign(size_t(q), -1);
    if (q == 1) {
        G.units_q.push_back(0);
        G.unit_index[0] = 0;
        G.unit_inv.push_back(0);
    } else {
        for (i64 b = 1; b < q; ++b)
            if (std::gcd(b, q) == 1) {
                G.unit_index[size_t(b)] = int(G.units_q.size());
                G.units_q.push_back(b);
            }
        for (i64 b : G.units_q) G.unit_inv.push_back(G.unit_index[size_t(arith::invmod(b, q))]);
    }
    for (i64 b : G.units_q)
        G.neg_index.push_back(G.unit_index[size_t((q - b) % q)]);

    auto chars = dirichlet::enumerate_characters(q);
    G.chi_tab.resize(chars.size());
    G.chi_conj.resize(chars.size());
    for (size_t ci = 0; ci < chars.size(); ++ci) {
        G.chi_tab[ci].resize(G.units_q.size());
        for (size_t bi = 0; bi < G.units_q.size(); ++bi)
            G.chi_tab[ci][bi] = chars[ci](q == 1 ? 1 : G.units_q[bi]);
        G.chi_conj[ci] = int(dirichlet::character_index(chars[ci].conjugate()));
    }
    return G;
}

}  // namespace detail

// Runs the csigma grid and reports pass/fail against the explicit-constant
// right-hand sides.
inline SigmaGridSummary run_sigma_grid(const SigmaGridSpec& spec) {
    SigmaGridSummary out;
    std::vector<i64> qs = spec.qs;
    if (qs.empty())
        for (i64 q = 1; q <= 30; ++q) qs.push_back(q);
    const int workers = std::max(1, std::min(resolve_threads(spec.threads), 16));

    for (i64 q : qs) {
        auto G = detail::make_grid_context(q, spec);
        auto chars = dirichlet::enumerate_characters(q);
        std::vector<i64> cs;
        for (i64 c = q; c <= spec.c_max; c += q) cs.push_back(c);

        const size_t nu = G.units_q.size(), ns = spec.sigmas.size(), nchi = chars.size();
        std::vector<detail::QAccum> partials(static_cast<size_t>(workers));
        std::vector<std::thread> pool;
        const size_t stripe = 32;
        for (int w = 0; w < workers; ++w) {
            partials[size_t(w)].init(G.pairs.size(), nu, nchi, ns);
            pool.emplace_back([&, w]() {
                UnitScratch scratch;
                for (size_t base = size_t(w) * stripe; base < cs.size();
                     base += stripe * size_t(workers))
                    for (size_t i = base; i < std::min(cs.size(), base + stripe); ++i)
                        detail::grid_process_c(G, cs[i], scratch, partials[size_t(w)]);
            });
        }
        for (auto& t : pool) t.join();
        detail::QAccum total;
        total.init(G.pairs.size(), nu, nchi, ns);
        for (auto& p : partials) total.add(p);

        for (size_t pi = 0; pi < G.pairs.size(); ++pi) {
            LemmaParams base;
            base.q = q;
            base.m = G.pairs[pi].m;
            base.n = G.pairs[pi].n;
            for (size_t s = 0; s < ns; ++s) {
                double sig = spec.sigmas[s];
                double tail1 = sigma_tail_restricted(LemmaVariant::g1, base, sig, spec.c_max);
                double tail2 = sigma_tail_restricted(LemmaVariant::g, base, sig, spec.c_max);
                double rhs1 = rhs_csigma(LemmaVariant::g1, base, sig);
                double rhs2 = rhs_csigma(LemmaVariant::g, base, sig);
                for (size_t bi = 0; bi < nu; ++bi) {
                    for (int variant = 0; variant < 2; ++variant) {
                        double lhs = variant == 0 ? total.g1[(pi * nu + bi) * ns + s]
                                                  : total.g2[(pi * nu + bi) * ns + s];
                        double tail = variant == 0 ? tail1 : tail2;
                        double rhs = variant == 0 ? rhs1 : rhs2;
                        ++out.cells;
                        out.max_ratio = std::max(out.max_ratio, (lhs + tail) / rhs);
                        if (lhs + tail > rhs) {
                            ++out.failures;
                            if (out.failed_cells.size() < 32)
                                out.failed_cells.push_back(
                                    std::string(variant == 0 ? "g1" : "g") + "-csigma q=" +
                                    std::to_string(q) + " m=" + std::to_string(base.m) + " n=" +
                                    std::to_string(base.n) + " a=" +
                                    std::to_string(G.units_q[bi]) + " sigma=" +
                                    std::to_string(sig));
                        }
                    }
                }
                if (G.pairs[pi].coprime_to_q) {
                    for (size_t ci = 0; ci < nchi; ++ci) {
                        LemmaParams pc = base;
                        pc.chi = chars[ci];
                        double tail0 = sigma_tail_twisted(pc, sig, spec.c_max);
                        double rhs0 = rhs_csigma(LemmaVariant::g0, pc, sig);
                        double lhs = total.g0[(pi * nchi + ci) * ns + s];
                        ++out.cells;
                        out.max_ratio = std::max(out.max_ratio, (lhs + tail0) / rhs0);
                        if (lhs + tail0 > rhs0) {
                            ++out.failures;
                            if (out.failed_cells.size() < 32)
                                out.failed_cells.push_back(
                                    "g0-csigma q=" + std::to_string(q) + " m=" +
                                    std::to_string(base.m) + " n=" + std::to_string(base.n) +
                                    " chi=" + std::to_string(ci) + " sigma=" +
                                    std::to_string(sig));
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace kzt::lemmas
