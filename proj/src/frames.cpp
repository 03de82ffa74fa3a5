#include "wdk/frames.hpp"

#include <algorithm>
#include <map>

namespace wdk {

namespace {

i64 modinv(i64 a, i64 n) {
    i64 g = n, x = 0, x1 = 1, a1 = ((a % n) + n) % n;
    while (a1) {
        i64 q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw NotInvertible("integer is not a unit modulo p^e");
    return ((x % n) + n) % n;
}

Elem divide_by_p(const Elem& a) {
    Elem out = a;
    const int p = a.ring()->p();
    for (auto& c : out.coords()) {
        if (c % p) throw std::invalid_argument("element is not divisible by p");
        c /= p;
    }
    return out;
}

bool divisible_by_p(const Elem& a) {
    for (auto c : a.coords())
        if (c % a.ring()->p()) return false;
    return true;
}

}  // namespace

// ------------------------------------------------------------ PD-thickenings

PDThickening PDThickening::trivial(RingPtr R) {
    PDThickening T;
    T.B_ = T.A_ = R;
    T.rule_ = PDRule::Trivial;
    return T;
}

PDThickening PDThickening::square_zero(RingPtr A, int rank) {
    PDThickening T;
    T.A_ = A;
    T.B_ = BaseRing::square_zero(A, rank, true);
    T.rule_ = PDRule::SquareZero;
    return T;
}

PDThickening PDThickening::canonical(RingPtr k, int e) {
    if (!k->is_field()) throw std::invalid_argument("canonical PD-thickening needs a finite field");
    if (e < 1) throw std::invalid_argument("canonical PD-thickening needs e >= 1");
    PDThickening T;
    T.A_ = k;
    T.B_ = k->galois_of_length(e);
    T.rule_ = e == 1 ? PDRule::Trivial : PDRule::Canonical;
    return T;
}

PDThickening PDThickening::from_json(const nlohmann::json& j) {
    std::string rule = j.at("rule").get<std::string>();
    RingPtr A = BaseRing::from_json(j.at("A"));
    if (rule == "trivial") return trivial(A);
    if (rule == "square-zero") return square_zero(A, j.value("rank", 1));
    if (rule == "canonical") return canonical(A, j.at("e").get<int>());
    throw std::invalid_argument("unknown PD rule: " + rule);
}

nlohmann::json PDThickening::to_json() const {
    switch (rule_) {
        case PDRule::Trivial: return {{"rule", "trivial"}, {"A", A_->to_json()}};
        case PDRule::SquareZero: return {{"rule", "square-zero"}, {"A", A_->to_json()}, {"rank", B_->nvars() - A_->nvars()}};
        case PDRule::Canonical: return {{"rule", "canonical"}, {"A", A_->to_json()}, {"e", B_->char_exp()}};
    }
    return {};
}

Elem PDThickening::project(const Elem& b) const {
    if (b.ring() != B_) throw std::invalid_argument("project: element not in B");
    switch (rule_) {
        case PDRule::Trivial:
            if (A_ == B_) return b;
            return B_->residue(b);
        case PDRule::SquareZero: return RingHom::reduction(B_, A_)(b);
        case PDRule::Canonical: return B_->residue(b);
    }
    return b;
}

Elem PDThickening::section(const Elem& a) const {
    if (a.ring() != A_) throw std::invalid_argument("section: element not in A");
    switch (rule_) {
        case PDRule::Trivial:
            if (A_ == B_) return a;
            return B_->teichmuller(a);
        case PDRule::SquareZero: {
            std::vector<Elem> im;
            for (int i = 0; i < A_->nvars(); ++i) im.push_back(B_->var(i));
            return RingHom(A_, B_, im)(a);
        }
        case PDRule::Canonical: return B_->teichmuller(a);
    }
    return a;
}

bool PDThickening::in_kernel(const Elem& b) const { return project(b).is_zero(); }

Elem PDThickening::divided_power(const Elem& x, i64 k) const {
    if (!in_kernel(x)) throw std::invalid_argument("divided power of an element outside the PD ideal");
    if (k == 0) return B_->one();
    if (k == 1) return x;
    if (rule_ != PDRule::Canonical) return B_->zero();
    // gamma_k(p y) = (p^k / k!) y^k
    const int p = B_->p();
    const i64 N = B_->modulus();
    int v = 0;
    i64 unit = 1;
    for (i64 i = 2; i <= k; ++i) {
        i64 j = i;
        while (j % p == 0) {
            j /= p;
            ++v;
        }
        unit = mulmod(unit, j % N, N);
    }
    i64 val = k - v;  // valuation of p^k / k!
    if (val >= B_->char_exp()) return B_->zero();
    i64 coeff = mulmod(ipow(p, static_cast<int>(val)), modinv(unit, N), N);
    Elem y = divide_by_p(x);
    return y.pow(static_cast<std::uint64_t>(k)).scaled(coeff);
}

BigInt divided_ghost_coefficient(int p, int k) {
    BigInt pk = boost::multiprecision::pow(BigInt(p), k), f = 1;
    for (BigInt i = 2; i <= pk; ++i) f *= i;
    return f / pk;
}

namespace {

i64 coefficient_mod(int p, int k, i64 N) {
    BigInt c = divided_ghost_coefficient(p, k) % N;
    return static_cast<i64>(c);
}

// sum_{i<n} c_{n-i} gamma_{p^{n-i}}(xi_i), the part of log_n not involving xi_n.
Elem log_tail(const PDThickening& T, const std::vector<Elem>& xi, int n) {
    RingPtr B = T.B();
    const int p = B->p();
    Elem acc = B->zero();
    if (T.rule() != PDRule::Canonical) return acc;
    for (int i = 0; i < n; ++i) {
        const int k = n - i;
        i64 pk = ipow(p, k);
        acc += T.divided_power(xi[i], pk).scaled(coefficient_mod(p, k, B->modulus()));
    }
    return acc;
}

}  // namespace

std::vector<Elem> pd_log(const PDThickening& T, const WittVec& xi) {
    if (xi.ring() != T.B()) throw std::invalid_argument("pd_log: Witt vector over the wrong ring");
    for (auto& c : xi.coords())
        if (!T.in_kernel(c)) throw std::invalid_argument("pd_log: coordinate outside the PD ideal");
    std::vector<Elem> out;
    for (int n = 0; n < xi.length(); ++n) out.push_back(xi[n] + log_tail(T, xi.coords(), n));
    return out;
}

WittVec pd_log_inv(const PDThickening& T, const std::vector<Elem>& log) {
    for (auto& c : log)
        if (c.ring() != T.B() || !T.in_kernel(c)) throw std::invalid_argument("pd_log_inv: coordinate outside the PD ideal");
    std::vector<Elem> xi;
    for (size_t n = 0; n < log.size(); ++n) xi.push_back(log[n] - log_tail(T, xi, static_cast<int>(n)));
    return WittVec(T.B(), std::move(xi));
}

// ------------------------------------------------------------ frames

Frame Frame::witt(RingPtr R, int m) {
    if (m < 1) throw std::invalid_argument("frame length must be >= 1");
    Frame F;
    F.kind_ = Kind::Witt;
    F.S0_ = R;
    F.m_ = m;
    F.has_sigma_ = m >= 2;  // sigma lands in W_{m-1}, the zero ring when m = 1
    return F;
}

Frame Frame::relative(const PDThickening& T, int m) {
    if (m < 1) throw std::invalid_argument("frame length must be >= 1");
    Frame F;
    F.kind_ = Kind::Relative;
    F.S0_ = T.B();
    F.m_ = m;
    F.has_sigma_ = m >= 2;
    F.T_ = T;
    return F;
}

RingPtr Frame::quotient() const { return kind_ == Kind::Witt ? S0_ : T_->A(); }

Frame Frame::truncate(int mp) const {
    if (mp < 1 || mp > m_) throw PrecisionError("truncation level outside 1..m");
    Frame F = *this;
    F.m_ = mp;
    F.has_sigma_ = false;
    return F;
}

Frame::Element Frame::truncate_element(const Element& a, int mp) const {
    Element b = a;
    b.w = a.w.truncated(mp);
    return b;
}

Frame::Element Frame::make(int degree, const WittVec& w, std::optional<Elem> x) const {
    if (w.ring() != S0_ || w.length() != m_) throw std::invalid_argument("frame element: wrong ring or length");
    Element e{degree, w, S0_->zero()};
    if (degree >= 1) {
        if (!in_augmentation_ideal(w)) throw std::invalid_argument("positive-degree component must lie in I");
        if (x) {
            if (kind_ == Kind::Witt && !x->is_zero()) throw std::invalid_argument("Witt frame has no J-component");
            if (kind_ == Kind::Relative && !T_->in_kernel(*x)) throw std::invalid_argument("J-component outside J");
            e.x = *x;
        }
    } else if (x && !x->is_zero()) {
        throw std::invalid_argument("J-component only exists in positive degree");
    }
    return e;
}

Frame::Element Frame::zero(int degree) const { return Element{degree, WittVec::zero(S0_, m_), S0_->zero()}; }

Frame::Element Frame::t() const { return Element{-1, WittVec::one(S0_, m_), S0_->zero()}; }

Frame::Element Frame::random(int degree, Rng& rng) const {
    if (degree <= 0) return Element{degree, random_witt(S0_, m_, rng), S0_->zero()};
    WittVec w = verschiebung(random_witt(S0_, m_, rng));
    Elem x = S0_->zero();
    if (kind_ == Kind::Relative) {
        Elem b = random_elem(S0_, rng);
        x = b - T_->section(T_->project(b));
    }
    return Element{degree, w, x};
}

Frame::Element Frame::t_map(const Element& a) const {
    if (a.degree >= 2) return Element{a.degree - 1, a.w.times_int(S0_->p()), a.x};
    if (a.degree == 1) {
        WittVec w = a.w;
        if (kind_ == Kind::Relative && !a.x.is_zero()) {
            std::vector<Elem> log(m_, S0_->zero());
            log[0] = a.x;
            w = w + pd_log_inv(*T_, log);
        }
        return Element{0, w, S0_->zero()};
    }
    return Element{a.degree - 1, a.w, S0_->zero()};
}

Frame::Element Frame::mul(const Element& a, const Element& b) const {
    if (a.degree > b.degree) return mul(b, a);
    // now a.degree <= b.degree
    if (b.degree <= 0) return Element{a.degree + b.degree, a.w * b.w, S0_->zero()};
    if (a.degree >= 1) {
        WittVec w = m_ == 1 ? WittVec::zero(S0_, 1)
                            : verschiebung_extend(verschiebung_inverse(a.w) * verschiebung_inverse(b.w));
        return Element{a.degree + b.degree, w, a.x * b.x};
    }
    // a.degree <= 0 < b.degree: move b down by |a.degree| steps of t, then scale.
    Element r = b;
    for (int k = 0; k < -a.degree; ++k) r = t_map(r);
    if (r.degree <= 0) return Element{r.degree, a.w * r.w, S0_->zero()};
    return Element{r.degree, a.w * r.w, w0(a.w) * r.x};
}

bool Frame::equal(const Element& a, const Element& b) const { return a.degree == b.degree && a.w == b.w && a.x == b.x; }

WittVec Frame::tau(const Element& a) const {
    Element r = a;
    while (r.degree > 0) r = t_map(r);
    return r.w;
}

WittVec Frame::sigma(const Element& a) const {
    if (!has_sigma_) throw std::logic_error("sigma is not defined on a truncated semi-frame");
    if (m_ < 2) throw PrecisionError("sigma needs frame length >= 2");
    if (a.degree >= 1) return verschiebung_inverse(a.w);
    WittVec s = frobenius(a.w).truncated(m_ - 1);
    for (int k = 0; k < -a.degree; ++k) s = s.times_int(S0_->p());
    return s;
}

Elem Frame::nu(const WittVec& s0) const { return kind_ == Kind::Witt ? w0(s0) : T_->project(w0(s0)); }

bool Frame::in_tau_S1(const WittVec& s0) const {
    return kind_ == Kind::Witt ? w0(s0).is_zero() : T_->in_kernel(w0(s0));
}

nlohmann::json Frame::axiom_report(Rng& rng, int samples) const {
    std::map<std::string, bool> checks;
    auto record = [&](const std::string& id, bool ok) {
        auto it = checks.find(id);
        checks[id] = (it == checks.end() ? true : it->second) && ok;
    };
    const WittVec one = WittVec::one(S0_, m_);
    record("tau_t_is_one", tau(t()) == one);
    if (has_sigma_) record("sigma_t_is_p", sigma(t()) == WittVec::from_int(S0_, m_ - 1, S0_->p()));

    // p lies in Rad(S_0): p is nilpotent in W_m of a p-nilpotent ring.
    {
        WittVec pw = WittVec::from_int(S0_, m_, S0_->p()), acc = pw;
        bool nil = false;
        for (int k = 0; k < 8 * m_ * S0_->char_exp() + 8 && !nil; ++k) {
            nil = acc.is_zero();
            acc = acc * pw;
        }
        record("p_in_radical", nil);
    }
    for (int s = 0; s < samples; ++s) {
        Element z = random(0, rng);
        record("tau0_identity", tau(z) == z.w);
        for (int k = 1; k <= 2; ++k) {
            Element tk = t();
            for (int j = 1; j < k; ++j) tk = mul(tk, t());
            Element c = mul(z, tk);
            record("tau_negative_bijective", c.degree == -k && tau(c) == z.w);
        }
        if (has_sigma_) {
            Elem d = w0(sigma(z)) - w0(z.w).pow(static_cast<std::uint64_t>(S0_->p()));
            record("sigma0_lifts_frobenius", divisible_by_p(d));
        }
        Element s1 = random(1, rng);
        Elem r = w0(tau(s1));
        record("tau_S1_in_radical", S0_->residue(r).is_zero());
        record("tau_S1_in_kernel_of_nu", nu(tau(s1)).is_zero());
        if (has_sigma_) record("sigma_t_relation", sigma(mul(t(), s1)) == sigma(t()) * sigma(s1));
        std::uniform_int_distribution<int> deg(-2, 2);
        Element a = random(deg(rng), rng), b = random(deg(rng), rng);
        Element ab = mul(a, b);
        record("tau_multiplicative", tau(ab) == tau(a) * tau(b));
        if (has_sigma_) record("sigma_multiplicative", sigma(ab) == sigma(a) * sigma(b));
        record("grading_additive", ab.degree == a.degree + b.degree);
    }
    nlohmann::json out = nlohmann::json::array();
    for (auto& [id, ok] : checks) out.push_back({{"id", id}, {"pass", ok}});
    return out;
}

// ------------------------------------------------------------ graded maps

void validate_graded_map(const Frame& F, const GradedMap& f) {
    const auto& A = f.tau_matrix;
    if (A.rows() != static_cast<int>(f.dst_degrees.size()) || A.cols() != static_cast<int>(f.src_degrees.size()))
        throw std::invalid_argument("graded map: matrix shape does not match the degree lists");
    for (int k = 0; k < A.rows(); ++k)
        for (int j = 0; j < A.cols(); ++j) {
            const WittVec& a = A(k, j);
            if (a.ring() != F.ring() || a.length() != F.length()) throw std::invalid_argument("graded map: entry over the wrong ring or length");
            int delta = f.src_degrees[j] - f.dst_degrees[k];
            if (delta >= 2) throw std::invalid_argument("graded map: degree gaps above 1 are not supported");
            if (delta == 1 && !F.in_tau_S1(a)) throw std::invalid_argument("graded map: degree-1 entry outside tau(S_1)");
        }
}

GradedMap compose(const GradedMap& f, const GradedMap& g) {
    if (f.src_degrees != g.dst_degrees) throw std::invalid_argument("compose: degree lists do not match");
    return GradedMap{g.src_degrees, f.dst_degrees, f.tau_matrix * g.tau_matrix};
}

GradedMap truncate_map(const GradedMap& f, int m) { return GradedMap{f.src_degrees, f.dst_degrees, w_truncate(f.tau_matrix, m)}; }

bool nakayama_check(const Frame& F, const GradedMap& f) {
    validate_graded_map(F, f);
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_degree;
    for (size_t j = 0; j < f.src_degrees.size(); ++j) by_degree[f.src_degrees[j]].first.push_back(static_cast<int>(j));
    for (size_t k = 0; k < f.dst_degrees.size(); ++k) by_degree[f.dst_degrees[k]].second.push_back(static_cast<int>(k));
    RingPtr R = F.quotient();
    for (auto& [deg, idx] : by_degree) {
        auto& [src, dst] = idx;
        if (src.size() != dst.size()) return false;
        EMat bar(static_cast<int>(dst.size()), static_cast<int>(src.size()), R->zero());
        for (size_t k = 0; k < dst.size(); ++k)
            for (size_t j = 0; j < src.size(); ++j)
                bar(static_cast<int>(k), static_cast<int>(j)) = F.nu(f.tau_matrix(dst[k], src[j]));
        if (!is_invertible(bar)) return false;
    }
    return true;
}

std::optional<GradedMap> graded_inverse(const Frame& F, const GradedMap& f) {
    validate_graded_map(F, f);
    if (f.src_degrees.size() != f.dst_degrees.size()) return std::nullopt;
    WMat inv;
    try {
        inv = inverse(f.tau_matrix);
    } catch (const NotInvertible&) {
        return std::nullopt;
    }
    GradedMap g{f.dst_degrees, f.src_degrees, inv};
    for (int j = 0; j < inv.rows(); ++j)
        for (int k = 0; k < inv.cols(); ++k) {
            int delta = g.src_degrees[k] - g.dst_degrees[j];
            if (delta >= 2) throw std::invalid_argument("graded inverse: degree gaps above 1 are not supported");
            if (delta == 1 && !F.in_tau_S1(inv(j, k))) return std::nullopt;
        }
    return g;
}

GradedMap random_graded_map(const Frame& F, const std::vector<int>& src, const std::vector<int>& dst, Rng& rng) {
    GradedMap f{src, dst, WMat(static_cast<int>(dst.size()), static_cast<int>(src.size()), WittVec::zero(F.ring(), F.length()))};
    for (size_t k = 0; k < dst.size(); ++k)
        for (size_t j = 0; j < src.size(); ++j) {
            int delta = src[j] - dst[k];
            if (delta >= 2) throw std::invalid_argument("random graded map: degree gaps above 1 are not supported");
            f.tau_matrix(static_cast<int>(k), static_cast<int>(j)) = F.tau(F.random(delta, rng));
        }
    return f;
}

GradedMap random_graded_automorphism(const Frame& F, const std::vector<int>& degrees, Rng& rng) {
    for (;;) {
        GradedMap f = random_graded_map(F, degrees, degrees, rng);
        if (graded_inverse(F, f)) return f;
    }
}

// ------------------------------------------------------------ towers

TowerLimit tower_reconstruct(const TruncationTower& T) {
    const int K = static_cast<int>(T.degrees.size());
    if (K < 1) throw std::invalid_argument("tower has no levels");
    if (K > T.frame.length()) throw std::invalid_argument("tower is longer than its frame");
    if (static_cast<int>(T.theta.size()) != K - 1) throw std::invalid_argument("tower needs one transition map per consecutive pair");
    auto sorted = [](std::vector<int> d) {
        std::sort(d.begin(), d.end());
        return d;
    };
    const auto shape = sorted(T.degrees[0]);
    for (int m = 1; m <= K; ++m)
        if (sorted(T.degrees[m - 1]) != shape)
            throw std::invalid_argument("tower inconsistency: graded rank changes at level " + std::to_string(m));
    for (int m = 1; m < K; ++m) {
        const GradedMap& th = T.theta[m - 1];
        if (th.src_degrees != T.degrees[m] || th.dst_degrees != T.degrees[m - 1])
            throw std::invalid_argument("tower inconsistency: transition " + std::to_string(m) + " has the wrong degrees");
        if (!nakayama_check(T.frame.truncate(m), th))
            throw std::invalid_argument("tower inconsistency: transition " + std::to_string(m) + " is not an isomorphism after base change");
    }
    TowerLimit L;
    L.degrees = T.degrees[K - 1];
    L.psi.resize(K);
    const Frame top = T.frame.truncate(K);
    L.psi[K - 1] = GradedMap{L.degrees, L.degrees, WMat::identity(static_cast<int>(L.degrees.size()), WittVec::zero(top.ring(), K))};
    for (int m = K - 1; m >= 1; --m) L.psi[m - 1] = compose(T.theta[m - 1], truncate_map(L.psi[m], m));
    for (int m = 1; m <= K; ++m)
        if (!nakayama_check(T.frame.truncate(m), L.psi[m - 1]))
            throw std::logic_error("tower reconstruction produced a non-isomorphism");
    return L;
}

TruncationTower random_tower(const Frame& F, const std::vector<int>& degrees, Rng& rng) {
    const int K = F.length();
    std::vector<GradedMap> phi;
    for (int m = 1; m <= K; ++m) phi.push_back(random_graded_automorphism(F.truncate(m), degrees, rng));
    TruncationTower T{F, std::vector<std::vector<int>>(K, degrees), {}};
    for (int m = 1; m < K; ++m) {
        auto inv = graded_inverse(F.truncate(m + 1), phi[m]);
        T.theta.push_back(compose(phi[m - 1], truncate_map(*inv, m)));
    }
    return T;
}

}  // namespace wdk
