#pragma once

// Dirichlet characters mod q, encoded by exponent vectors against a canonical
// generator choice for (Z/qZ)^x: the smallest primitive root per odd prime
// power, and <-1, 5> for 2^k with k >= 3. The canonical choice keeps the
// enumeration order stable across runs.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "kzt/arith.hpp"
#include "kzt/unity.hpp"

namespace kzt::dirichlet {

using arith::cplx;
using arith::i64;
using arith::i128;
using arith::u64;

struct UnitGroupStructure {
    i64 q = 1;
    i64 phi = 1;
    i64 exponent_lcm = 1;  // lcm of generator orders

    struct Gen {
        i64 lifted;  // generator as a unit mod q (== 1 mod q/p^alpha)
        i64 order;
    };
    std::vector<Gen> gens;

    struct Component {
        i64 p;
        int alpha;
        i64 pk;
        int gen_index;  // first generator owned by this component
        int ngens;      // 0 (trivial), 1, or 2 (p = 2, alpha >= 3)
        std::vector<std::int32_t> dlog;  // residue mod pk -> exponent of the cyclic part; -1 for non-units
        std::vector<std::int8_t> sign;   // two-generator case: exponent of -1
    };
    std::vector<Component> comps;

    static std::shared_ptr<const UnitGroupStructure> make(i64 q);

    // exponent vector of the unit d against gens; false if gcd(d, q) != 1
    bool exponents_of(i64 d, std::vector<i64>& out) const {
        d %= q;
        if (d < 0) d += q;
        out.assign(gens.size(), 0);
        for (const auto& c : comps) {
            i64 r = d % c.pk;
            if (c.ngens == 0) {
                if (c.pk > 1 && r % c.p == 0) return false;
                continue;
            }
            std::int32_t k = c.dlog[size_t(r)];
            if (k < 0) return false;
            if (c.ngens == 1) {
                out[size_t(c.gen_index)] = k;
            } else {
                out[size_t(c.gen_index)] = c.sign[size_t(r)];
                out[size_t(c.gen_index) + 1] = k;
            }
        }
        return true;
    }
};

namespace detail {

inline i64 smallest_primitive_root(i64 p, i64 pk) {
    i64 phi = pk / p * (p - 1);
    auto fac = arith::factorize(phi);
    for (i64 g = 2;; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [ell, e] : fac.pairs)
            if (arith::powmod(u64(g), u64(phi / ell), u64(pk)) == 1) { ok = false; break; }
        if (ok) return g;
    }
}

}  // namespace detail

inline std::shared_ptr<const UnitGroupStructure> UnitGroupStructure::make(i64 q) {
    if (q < 1) throw std::invalid_argument("UnitGroupStructure: q must be >= 1");
    auto G = std::make_shared<UnitGroupStructure>();
    G->q = q;
    auto fq = arith::factorize(q);
    for (auto [p, alpha] : fq.pairs) {
        Component c;
        c.p = p;
        c.alpha = alpha;
        c.pk = 1;
        for (int i = 0; i < alpha; ++i) c.pk *= p;
        c.gen_index = int(G->gens.size());
        i64 cof = q / c.pk;
        if (p == 2 && alpha == 1) {
            c.ngens = 0;
        } else if (p == 2 && alpha == 2) {
            c.ngens = 1;
            c.dlog.assign(size_t(c.pk), -1);
            c.dlog[1] = 0;
            c.dlog[3] = 1;
            i64 lift = arith::crt_compose({{3, c.pk}, {1, cof}}).value;
            G->gens.push_back({lift, 2});
        } else if (p == 2) {
            c.ngens = 2;
            c.dlog.assign(size_t(c.pk), -1);
            c.sign.assign(size_t(c.pk), 0);
            i64 order5 = c.pk / 4;
            i64 r = 1;
            for (i64 k = 0; k < order5; ++k) {
                c.dlog[size_t(r)] = std::int32_t(k);
                c.sign[size_t(r)] = 0;
                i64 neg = c.pk - r;
                c.dlog[size_t(neg)] = std::int32_t(k);
                c.sign[size_t(neg)] = 1;
                r = r * 5 % c.pk;
            }
            i64 lift_m1 = arith::crt_compose({{c.pk - 1, c.pk}, {1, cof}}).value;
            i64 lift_5 = arith::crt_compose({{5, c.pk}, {1, cof}}).value;
            G->gens.push_back({lift_m1, 2});
            G->gens.push_back({lift_5, order5});
        } else {
            c.ngens = 1;
            i64 g = detail::smallest_primitive_root(p, c.pk);
            i64 order = c.pk / p * (p - 1);
            c.dlog.assign(size_t(c.pk), -1);
            i64 r = 1;
            for (i64 k = 0; k < order; ++k) {
                c.dlog[size_t(r)] = std::int32_t(k);
                r = i64(arith::mulmod(u64(r), u64(g), u64(c.pk)));
            }
            i64 lift = arith::crt_compose({{g, c.pk}, {1, cof}}).value;
            G->gens.push_back({lift, order});
        }
        G->comps.push_back(std::move(c));
    }
    G->phi = 1;
    for (auto& g : G->gens) G->phi *= g.order;
    G->exponent_lcm = 1;
    for (auto& g : G->gens) G->exponent_lcm = std::lcm(G->exponent_lcm, g.order);
    return G;
}

class DirichletCharacter {
  public:
    DirichletCharacter() : G_(UnitGroupStructure::make(1)) {}
    DirichletCharacter(std::shared_ptr<const UnitGroupStructure> G, std::vector<i64> exps)
        : G_(std::move(G)), e_(std::move(exps)) {
        if (e_.size() != G_->gens.size())
            throw std::invalid_argument("DirichletCharacter: exponent vector size mismatch");
        for (size_t i = 0; i < e_.size(); ++i) {
            e_[i] %= G_->gens[i].order;
            if (e_[i] < 0) e_[i] += G_->gens[i].order;
        }
    }

    i64 modulus() const { return G_->q; }
    const std::vector<i64>& exponents() const { return e_; }
    const std::shared_ptr<const UnitGroupStructure>& group() const { return G_; }

    // exact phase: chi(d) = e(num/den); false when gcd(d, q) > 1
    bool phase(i64 d, i64& num, i64& den) const {
        thread_local std::vector<i64> ks;
        if (!G_->exponents_of(d, ks)) return false;
        i64 L = G_->exponent_lcm;
        i128 acc = 0;
        for (size_t i = 0; i < e_.size(); ++i) {
            i64 ni = G_->gens[i].order;
            acc += (i128)(e_[i] * ks[i] % ni) * (L / ni);
            acc %= L;
        }
        num = i64(acc);
        den = L;
        return true;
    }

    cplx operator()(i64 d) const {
        i64 num, den;
        if (!phase(d, num, den)) return {0.0, 0.0};
        return arith::unit_root(num, den);
    }

    bool is_principal() const {
        for (i64 e : e_)
            if (e != 0) return false;
        return true;
    }

    // kappa with chi(-1) = (-1)^kappa
    int parity() const {
        i64 num, den;
        phase(-1, num, den);
        return num == 0 ? 0 : 1;
    }
    bool is_even() const { return parity() == 0; }

    i64 conductor() const {
        i64 cond = 1;
        for (const auto& c : G_->comps) {
            if (c.ngens == 0) continue;
            if (c.p != 2) {
                i64 e = e_[size_t(c.gen_index)];
                if (e == 0) continue;
                int v = 0;
                while (e % c.p == 0) e /= c.p, ++v;
                i64 local = 1;
                for (int i = 0; i < c.alpha - v; ++i) local *= c.p;
                cond *= local;
            } else if (c.alpha == 2) {
                if (e_[size_t(c.gen_index)] != 0) cond *= 4;
            } else {
                i64 eps = e_[size_t(c.gen_index)];
                i64 e5 = e_[size_t(c.gen_index) + 1];
                if (e5 == 0) {
                    if (eps != 0) cond *= 4;
                } else {
                    int v = 0;
                    while (e5 % 2 == 0) e5 /= 2, ++v;
                    cond *= i64(1) << (c.alpha - v);
                }
            }
        }
        return cond;
    }

    bool is_primitive() const { return conductor() == G_->q; }

    DirichletCharacter conjugate() const {
        std::vector<i64> e(e_.size());
        for (size_t i = 0; i < e_.size(); ++i)
            e[i] = e_[i] == 0 ? 0 : G_->gens[i].order - e_[i];
        return {G_, std::move(e)};
    }

    DirichletCharacter operator*(const DirichletCharacter& o) const {
        if (o.modulus() != modulus())
            throw std::invalid_argument("character product: moduli differ");
        std::vector<i64> e(e_.size());
        for (size_t i = 0; i < e_.size(); ++i) e[i] = (e_[i] + o.e_[i]) % G_->gens[i].order;
        return {G_, std::move(e)};
    }

  private:
    std::shared_ptr<const UnitGroupStructure> G_;
    std::vector<i64> e_;
};

inline DirichletCharacter principal_character(i64 q) {
    auto G = UnitGroupStructure::make(q);
    return {G, std::vector<i64>(G->gens.size(), 0)};
}

// Stable enumeration: mixed-radix counter over the generator orders.
inline std::vector<DirichletCharacter> enumerate_characters(i64 q, std::optional<int> parity = {}) {
    auto G = UnitGroupStructure::make(q);
    std::vector<DirichletCharacter> out;
    std::vector<i64> e(G->gens.size(), 0);
    for (;;) {
        DirichletCharacter chi(G, e);
        if (!parity || chi.parity() == *parity) out.push_back(chi);
        size_t i = 0;
        for (; i < e.size(); ++i) {
            if (++e[i] < G->gens[i].order) break;
            e[i] = 0;
        }
        if (i == e.size()) break;
    }
    return out;
}

inline DirichletCharacter character_from_index(i64 q, i64 index) {
    auto G = UnitGroupStructure::make(q);
    if (index < 0 || index >= G->phi)
        throw std::invalid_argument("character_from_index: index out of range");
    std::vector<i64> e(G->gens.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) {
        e[i] = index % G->gens[i].order;
        index /= G->gens[i].order;
    }
    return {G, std::move(e)};
}

inline i64 character_index(const DirichletCharacter& chi) {
    const auto& G = *chi.group();
    i64 idx = 0, scale = 1;
    for (size_t i = 0; i < G.gens.size(); ++i) {
        idx += chi.exponents()[i] * scale;
        scale *= G.gens[i].order;
    }
    return idx;
}

// Character mod q induced from chi (mod f), f | q.
inline DirichletCharacter induce(const DirichletCharacter& chi, i64 q) {
    i64 f = chi.modulus();
    if (q % f != 0) throw std::invalid_argument("induce: conductor does not divide target modulus");
    auto G = UnitGroupStructure::make(q);
    std::vector<i64> e(G->gens.size(), 0);
    for (size_t i = 0; i < G->gens.size(); ++i) {
        i64 num, den;
        if (!chi.phase(G->gens[i].lifted % f, num, den))
            throw std::invalid_argument("induce: generator not coprime to conductor");
        i64 ni = G->gens[i].order;
        i128 t = (i128)num * ni;
        if (t % den != 0) throw std::logic_error("induce: non-integral exponent");
        e[i] = i64(t / den) % ni;
    }
    return {G, std::move(e)};
}

// Primitive character inducing chi.
inline DirichletCharacter primitive_part(const DirichletCharacter& chi) {
    i64 f = chi.conductor();
    i64 q = chi.modulus();
    auto Gf = UnitGroupStructure::make(f);
    std::vector<i64> e(Gf->gens.size(), 0);
    for (size_t i = 0; i < Gf->gens.size(); ++i) {
        i64 d = Gf->gens[i].lifted;
        while (std::gcd(d, q) != 1) d += f;
        i64 num, den;
        chi.phase(d, num, den);
        i64 ni = Gf->gens[i].order;
        i128 t = (i128)num * ni;
        if (t % den != 0) throw std::logic_error("primitive_part: non-integral exponent");
        e[i] = i64(t / den) % ni;
    }
    return {Gf, std::move(e)};
}

// Component of chi modulo a unitary divisor m of q (gcd(m, q/m) = 1).
inline DirichletCharacter component_mod(const DirichletCharacter& chi, i64 m) {
    i64 q = chi.modulus();
    if (m < 1 || q % m != 0 || std::gcd(m, q / m) != 1)
        throw std::invalid_argument("component_mod: m must be a unitary divisor of q");
    auto Gm = UnitGroupStructure::make(m);
    const auto& Gq = *chi.group();
    std::vector<i64> e(Gm->gens.size(), 0);
    for (const auto& cm : Gm->comps) {
        for (size_t ci = 0; ci < Gq.comps.size(); ++ci) {
            const auto& cq = Gq.comps[ci];
            if (cq.p != cm.p) continue;
            for (int j = 0; j < cm.ngens; ++j)
                e[size_t(cm.gen_index + j)] = chi.exponents()[size_t(cq.gen_index + j)];
        }
    }
    return {Gm, std::move(e)};
}

// Gauss sum: sum over d mod q of chi(d) e(d/q).
inline cplx gauss_sum(const DirichletCharacter& chi) {
    i64 q = chi.modulus();
    if (q == 1) return {1.0, 0.0};
    i64 L = chi.group()->exponent_lcm;
    i64 M = std::lcm(L, q);
    cplx sum = 0.0;
    for (i64 d = 1; d < q; ++d) {
        i64 num, den;
        if (!chi.phase(d, num, den)) continue;
        i128 tot = ((i128)num * (M / den) + (i128)d * (M / q)) % M;
        sum += arith::unit_root(i64(tot), M);
    }
    return sum;
}

}  // namespace kzt::dirichlet
