#pragma once

// Dirichlet characters mod q through CRT-decomposed discrete-log tables on
// the prime-power components. Characters are indexed in mixed radix over the
// component character groups; primitivity is decided componentwise and can be
// cross-checked by the induction-from-divisor test.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "weaksub/common.hpp"

namespace weaksub {

namespace detail {

inline int64_t pow_mod(int64_t b, int64_t e, int64_t m) {
    int64_t r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

inline std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

inline int64_t primitive_root_mod_p(int64_t p) {
    if (p == 2) return 1;
    auto fac = prime_factors(p - 1);
    for (int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (int64_t q : fac)
            if (pow_mod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw numeric_error("no primitive root found");  // unreachable for prime p
}

}  // namespace detail

// One prime-power component p^e of the modulus.
struct CharComponent {
    int64_t p = 0, e = 0, pe = 0;
    // odd p, and p = 2 with e <= 2: cyclic, one generator / one exponent.
    // p = 2, e >= 3: <-1> x <5>, two exponents (order 2 and 2^{e-2}).
    bool two_generator = false;
    int64_t order0 = 1, order1 = 1;              // orders of the index digits
    std::vector<int32_t> dlog0, dlog1;           // per residue; -1 on non-units
};

class DirichletGroup {
  public:
    int64_t q = 0;
    std::vector<CharComponent> comps;

    explicit DirichletGroup(int64_t q_) : q(q_) {
        if (q < 3) throw precondition_error("DirichletGroup: q < 3");
        int64_t m = q;
        for (int64_t p = 2; p * p <= m; ++p) {
            if (m % p != 0) continue;
            int64_t pe = 1, e = 0;
            while (m % p == 0) { m /= p; pe *= p; ++e; }
            comps.push_back(make_component(p, e, pe));
        }
        if (m > 1) comps.push_back(make_component(m, 1, m));
    }

    int64_t character_count() const {
        int64_t n = 1;
        for (const auto& c : comps) n *= c.order0 * c.order1;
        return n;
    }

    // Mixed-radix decode of a character index into per-component exponents.
    std::vector<std::pair<int64_t, int64_t>> exponents(int64_t index) const {
        if (index < 0 || index >= character_count())
            throw precondition_error("DirichletGroup: character index out of range");
        std::vector<std::pair<int64_t, int64_t>> out;
        for (const auto& c : comps) {
            int64_t c0 = index % c.order0;
            index /= c.order0;
            int64_t c1 = index % c.order1;
            index /= c.order1;
            out.emplace_back(c0, c1);
        }
        return out;
    }

    // Componentwise primitivity: each component character must not factor
    // through p^{e-1}.
    bool is_primitive(int64_t index) const {
        auto ex = exponents(index);
        for (size_t i = 0; i < comps.size(); ++i) {
            const auto& c = comps[i];
            auto [c0, c1] = ex[i];
            if (c.p == 2) {
                if (c.e == 1) return false;           // no primitive char has the factor 2^1
                if (c.e == 2 && c0 == 0) return false;  // trivial mod 4
                if (c.e >= 3 && c1 % 2 == 0) return false;  // <5>-part must have full order
            } else {
                if (c.e == 1 && c0 == 0) return false;      // trivial component
                if (c.e >= 2 && c0 % c.p == 0) return false;  // factors through p^{e-1}
            }
        }
        return true;
    }

    // chi(n) for n = 0..q-1.
    std::vector<cplx> character_table(int64_t index) const {
        auto ex = exponents(index);
        std::vector<cplx> chi(static_cast<size_t>(q), cplx(0.0));
        for (int64_t n = 0; n < q; ++n) {
            if (std::gcd(n, q) != 1) continue;
            double angle = 0.0;
            bool unit = true;
            for (size_t i = 0; i < comps.size(); ++i) {
                const auto& c = comps[i];
                int64_t r = n % c.pe;
                int32_t d0 = c.dlog0[static_cast<size_t>(r)];
                if (d0 < 0) { unit = false; break; }
                auto [c0, c1] = ex[i];
                angle += static_cast<double>(c0) * d0 / static_cast<double>(c.order0);
                if (c.two_generator) {
                    int32_t d1 = c.dlog1[static_cast<size_t>(r)];
                    angle += static_cast<double>(c1) * d1 / static_cast<double>(c.order1);
                }
            }
            if (unit) chi[static_cast<size_t>(n)] = std::polar(1.0, 2.0 * PI * angle);
        }
        return chi;
    }

    // Induction check: chi restricted to a == 1 (mod q/l) is trivial iff chi is
    // induced from modulus q/l. Used as an independent primitivity oracle.
    bool induced_from(const std::vector<cplx>& chi, int64_t divisor_modulus) const {
        for (int64_t a = 1 + divisor_modulus; a < q; a += divisor_modulus) {
            if (std::gcd(a, q) != 1) continue;
            if (std::abs(chi[static_cast<size_t>(a)] - cplx(1.0)) > 1e-9) return false;
        }
        return true;
    }

  private:
    static CharComponent make_component(int64_t p, int64_t e, int64_t pe) {
        CharComponent c;
        c.p = p;
        c.e = e;
        c.pe = pe;
        c.dlog0.assign(static_cast<size_t>(pe), -1);
        if (p == 2) {
            if (e == 1) {
                c.order0 = 1;
                c.dlog0[1 % pe] = 0;
            } else if (e == 2) {
                c.order0 = 2;
                c.dlog0[1] = 0;
                c.dlog0[3] = 1;
            } else {
                c.two_generator = true;
                c.order0 = 2;                      // sign digit, generator -1
                c.order1 = pe / 4;                 // generator 5
                c.dlog1.assign(static_cast<size_t>(pe), -1);
                int64_t v = 1;
                for (int64_t k = 0; k < c.order1; ++k) {
                    c.dlog0[static_cast<size_t>(v)] = 0;
                    c.dlog1[static_cast<size_t>(v)] = static_cast<int32_t>(k);
                    int64_t neg = pe - v;
                    c.dlog0[static_cast<size_t>(neg)] = 1;
                    c.dlog1[static_cast<size_t>(neg)] = static_cast<int32_t>(k);
                    v = v * 5 % pe;
                }
            }
            return c;
        }
        // odd p^e: cyclic of order p^{e-1}(p-1)
        c.order0 = (pe / p) * (p - 1);
        int64_t g = detail::primitive_root_mod_p(p);
        if (e > 1 && detail::pow_mod(g, p - 1, p * p) == 1) g += p;
        int64_t v = 1;
        for (int64_t k = 0; k < c.order0; ++k) {
            c.dlog0[static_cast<size_t>(v)] = static_cast<int32_t>(k);
            v = v * g % pe;
        }
        return c;
    }
};

// Gauss sum g(chi) = sum_a chi(a) e(a/q).
inline cplx gauss_sum(const std::vector<cplx>& chi) {
    const int64_t q = static_cast<int64_t>(chi.size());
    cplx acc(0.0);
    for (int64_t a = 1; a < q; ++a)
        if (chi[static_cast<size_t>(a)] != cplx(0.0))
            acc += chi[static_cast<size_t>(a)] *
                   std::polar(1.0, 2.0 * PI * static_cast<double>(a) / static_cast<double>(q));
    return acc;
}

// All primitive character indices mod q, ascending.
inline std::vector<int64_t> primitive_indices(const DirichletGroup& G) {
    std::vector<int64_t> out;
    for (int64_t i = 0; i < G.character_count(); ++i)
        if (G.is_primitive(i)) out.push_back(i);
    return out;
}

}  // namespace weaksub
