#include "wdk/crystal.hpp"

#include "wdk/io.hpp"

namespace wdk {

using nlohmann::json;

namespace {

// Hodge weight of each coordinate of Lambda^{(x)m} (x) (Lambda^dual)^{(x)n}
// for the basis weights w.
std::vector<int> tensor_weights(const std::vector<int>& w, int m, int n) {
    std::vector<int> out{0};
    for (int f = 0; f < m + n; ++f) {
        std::vector<int> next;
        next.reserve(out.size() * w.size());
        for (int x : out)
            for (int wi : w) next.push_back(f < m ? x + wi : x - wi);
        out = std::move(next);
    }
    return out;
}

EMat kron_power(const EMat& A, int a, const EMat& B, int b, const Elem& one) {
    EMat out = EMat::identity(1, one.ring()->zero());
    for (int i = 0; i < a; ++i) out = kron(out, A);
    for (int i = 0; i < b; ++i) out = kron(out, B);
    return out;
}

ScaledMatrix normalized(EMat M, int exp) {
    if (exp < 0) {
        M = M.zero().ring()->from_int(ipow(M.zero().ring()->p(), -exp)) * M;
        exp = 0;
    }
    return {std::move(M), exp};
}

EMat scalar_matrix(RingPtr R, int n, i64 c) { return R->from_int(c) * EMat::identity(n, R->zero()); }

std::vector<WittVec> apply(const WMat& cov, const WMat& dual, const Tensor& s, const std::vector<WittVec>& t) {
    return tensor_action(cov, dual, s.m, s.n, t);
}

std::vector<WittVec> truncate_all(const std::vector<WittVec>& v, int m) {
    std::vector<WittVec> out;
    for (auto& x : v) out.push_back(x.truncated(m));
    return out;
}

bool block_in_augmentation(const WMat& g, const HodgeEmbeddingDatum& D) {
    for (int i = 0; i < D.d; ++i)
        for (int j = D.d; j < D.h; ++j)
            if (!in_augmentation_ideal(g(i, j))) return false;
    return true;
}

}  // namespace

// ------------------------------------------------------------ evaluation

WMat lift_through_section(const WMat& U, const PDThickening& T) {
    if (U.zero().ring() != T.A()) throw std::invalid_argument("crystal: display and thickening have different bases");
    const int m = U.zero().length();
    switch (T.rule()) {
        case PDRule::Trivial: return U;
        case PDRule::SquareZero: {
            std::vector<Elem> im;
            for (int i = 0; i < T.A()->nvars(); ++i) im.push_back(T.B()->var(i));
            return w_map(RingHom(T.A(), T.B(), im), U);
        }
        case PDRule::Canonical: {
            const int len = m - T.B()->char_exp() + 1;
            if (len < 1) throw PrecisionError("crystal: W_e(k) needs the display to Witt length at least e");
            return U.map([&](const WittVec& x) { return witt_from_residue(x, T.B(), len); });
        }
    }
    return U;
}

namespace {

CrystalEvaluation evaluate_matrices(const WMat& U, const HodgeEmbeddingDatum& D, const PDThickening& T, int tensor) {
    if (U.rows() != D.h || U.cols() != D.h) throw std::invalid_argument("crystal: matrix size differs from the datum");
    if (tensor < -1 || tensor >= static_cast<int>(D.tensors.size())) throw std::invalid_argument("crystal: no such tensor");
    RingPtr B = T.B();
    const int p = B->p();
    const EMat X = w_ghost0(lift_through_section(U, T));

    std::vector<Elem> fdiag, vdiag;
    for (int w : D.mu) {
        fdiag.push_back(w ? B->from_int(p) : B->one());
        vdiag.push_back(w ? B->one() : B->from_int(p));
    }
    const EMat F = X * EMat::diagonal(fdiag, B->zero());
    const EMat V = EMat::diagonal(vdiag, B->zero()) * inverse(X);

    CrystalEvaluation E;
    E.thickening = T;
    E.tensor = tensor;
    if (tensor < 0) {
        E.F = {F, 0};
        E.V = {V, 0};
        E.weights = D.mu;
    } else {
        const Tensor& s = D.tensors[tensor];
        E.m = s.m;
        E.n = s.n;
        // F_i = p^{-n} F^{(x)m} (x) (V^t)^{(x)n} and V_i = p F_i^{-1}.
        E.F = normalized(kron_power(F, s.m, V.transpose(), s.n, B->one()), s.n);
        E.V = normalized(kron_power(V, s.m, F.transpose(), s.n, B->one()), s.m - 1);
        E.weights = tensor_weights(D.mu, s.m, s.n);
    }
    E.rank = E.F.M.rows();
    return E;
}

}  // namespace

CrystalEvaluation evaluate_banal_crystal(const WMat& U, const HodgeEmbeddingDatum& D, const PDThickening& T, int tensor) {
    CrystalEvaluation E = evaluate_matrices(U, D, T, tensor);
    try {
        E.adjoint_nilpotent = adjoint_nilpotence(U, D);
    } catch (const std::exception&) {
        E.adjoint_nilpotent.reset();
    }
    return E;
}

CrystalEvaluation transport(const CrystalEvaluation& E, const PDThickening& target) {
    if (target.A() != E.thickening.A()) throw std::invalid_argument("transport: thickenings of different bases");
    RingHom f = RingHom::reduction(E.thickening.B(), target.B());
    CrystalEvaluation out = E;
    out.thickening = target;
    out.F.M = e_map(f, E.F.M);
    out.V.M = e_map(f, E.V.M);
    return out;
}

bool check_fv(const CrystalEvaluation& E) {
    RingPtr B = E.thickening.B();
    const int k = 1 + E.F.exp + E.V.exp;
    const EMat pk = k >= B->char_exp() ? EMat(E.rank, E.rank, B->zero()) : scalar_matrix(B, E.rank, ipow(B->p(), k));
    return E.F.M * E.V.M == pk && E.V.M * E.F.M == pk;
}

json CrystalEvaluation::to_json() const {
    json j;
    j["thickening"] = thickening.to_json();
    j["representation"] = tensor < 0 ? std::string("eta") : "eta(" + std::to_string(tensor) + ")";
    j["rank"] = rank;
    j["F"] = {{"matrix", emat_to_json(F.M)}, {"denominator_exp", F.exp}};
    j["V"] = {{"matrix", emat_to_json(V.M)}, {"denominator_exp", V.exp}};
    j["weights"] = weights;
    j["adjoint_nilpotent"] = adjoint_nilpotent ? json(*adjoint_nilpotent) : json(nullptr);
    return j;
}

// ------------------------------------------------------------ Tate tensors

std::vector<TateTensor> tate_tensors(const HodgeEmbeddingDatum& D, const PDThickening& T) {
    std::vector<TateTensor> out;
    for (size_t i = 0; i < D.tensors.size(); ++i) {
        const Tensor& s = D.tensors[i];
        out.push_back({static_cast<int>(i), s.m, s.n, s.weight, tensor_in(T.B(), s)});
    }
    return out;
}

bool in_twisted_fil0(const TateTensor& t, const HodgeEmbeddingDatum& D) {
    const auto w = tensor_weights(D.mu, t.m, t.n);
    for (size_t k = 0; k < t.section.size(); ++k)
        if (!t.section[k].is_zero() && w[k] < t.weight) return false;
    return true;
}

std::vector<bool> check_frobenius_equivariance(const WMat& U, const HodgeEmbeddingDatum& D, const PDThickening& T) {
    const CrystalEvaluation E = evaluate_matrices(U, D, T, -1);
    RingPtr B = T.B();
    const EMat Vt = E.V.M.transpose();
    std::vector<bool> out;
    for (const TateTensor& t : tate_tensors(D, T)) {
        const int k = t.n + t.weight;
        if (k >= B->char_exp())
            throw PrecisionError("Frobenius equivariance: p^" + std::to_string(k) + " vanishes in the thickening");
        const auto lhs = tensor_action(E.F.M, Vt, t.m, t.n, t.section);
        const Elem pk = B->from_int(ipow(B->p(), k));
        bool ok = true;
        for (size_t i = 0; i < lhs.size() && ok; ++i) ok = lhs[i] == pk * t.section[i];
        out.push_back(ok);
    }
    return out;
}

// ------------------------------------------------------------ tensor windows

TensorWindow banal_tensor_window(const WMat& U, const HodgeEmbeddingDatum& D) {
    RingPtr R = U.zero().ring();
    const int m = U.zero().length();
    TensorWindow W{Window{D.d, D.h - D.d, U}, {}};
    for (const Tensor& s : D.tensors) W.sections.push_back(tensor_in(R, m, s));
    return W;
}

json SmuReport::to_json() const {
    return {{"tensors_in_fil0", tensors_in_fil0},
            {"mu_shaped_trivialization", mu_shaped_trivialization},
            {"frobenius_equivariant", frobenius_equivariant},
            {"pass", all()}};
}

namespace {

bool carries_tensors(const WMat& g, const TensorWindow& W, const HodgeEmbeddingDatum& D) {
    const WMat dual = inverse(g).transpose();
    const int m = g.zero().length();
    for (size_t i = 0; i < D.tensors.size(); ++i) {
        const auto s = tensor_in(g.zero().ring(), m, D.tensors[i]);
        if (apply(g, dual, D.tensors[i], s) != truncate_all(W.sections[i], m)) return false;
    }
    return true;
}

void check_window_shape(const TensorWindow& W, const HodgeEmbeddingDatum& D) {
    if (W.window.rank() != D.h) throw std::invalid_argument("tensor window: rank differs from the datum");
    if (W.sections.size() != D.tensors.size()) throw std::invalid_argument("tensor window: wrong number of tensor sections");
    for (size_t i = 0; i < D.tensors.size(); ++i)
        if (W.sections[i].size() != D.tensors[i].coords.size())
            throw std::invalid_argument("tensor window: section " + std::to_string(i) + " has the wrong size");
}

}  // namespace

WMat extract_U_beta(const TensorWindow& W, const DisplayGroupElement& beta, const HodgeEmbeddingDatum& D) {
    check_window_shape(W, D);
    if (W.window.rank0 != D.d) throw std::invalid_argument("U_beta: Hodge filtration does not have the shape of mu");
    if (beta.length() != W.window.psi.zero().length()) throw PrecisionError("U_beta: trivialization must have Witt length m+1");
    if (!block_in_augmentation(beta.g, D)) throw std::invalid_argument("U_beta: trivialization does not respect the grading");
    if (!carries_tensors(tau_of(beta), W, D)) throw std::invalid_argument("U_beta: trivialization does not carry s to t");
    return mu_action(W.window.psi, beta, D);
}

SmuReport check_smu_structure(const TensorWindow& W, const HodgeEmbeddingDatum& D, const std::optional<DisplayGroupElement>& beta) {
    check_window_shape(W, D);
    RingPtr R = W.window.psi.zero().ring();
    const int m = W.window.psi.zero().length();
    const int p = R->p();
    SmuReport rep;

    std::vector<int> w(W.window.rank(), 1);
    for (int i = 0; i < W.window.rank0; ++i) w[i] = 0;

    rep.tensors_in_fil0 = true;
    for (size_t i = 0; i < D.tensors.size() && rep.tensors_in_fil0; ++i) {
        const auto tw = tensor_weights(w, D.tensors[i].m, D.tensors[i].n);
        for (size_t k = 0; k < tw.size(); ++k)
            if (!w0(W.sections[i][k]).is_zero() && tw[k] < D.tensors[i].weight) {
                rep.tensors_in_fil0 = false;
                break;
            }
    }

    if (W.window.rank0 == D.d) {
        DisplayGroupElement b = beta ? *beta : DisplayGroupElement{WMat::identity(D.h, WittVec::zero(R, m + 1))};
        try {
            rep.mu_shaped_trivialization = fixes_tensors(extract_U_beta(W, b, D), D);
        } catch (const std::invalid_argument&) {
            rep.mu_shaped_trivialization = false;
        }
    }

    // (F#^{(x)m} (x) (V#^t)^{(x)n}) sigma(t) = p^{n+w} t, at the length sigma allows.
    const int mm = R->char_exp() == 1 ? m : m - 1;
    if (mm >= 1) {
        const WMat F = w_truncate(f0_sharp(W.window), mm);
        const WMat Vt = w_truncate(v_sharp(W.window), mm).transpose();
        rep.frobenius_equivariant = true;
        for (size_t i = 0; i < D.tensors.size() && rep.frobenius_equivariant; ++i) {
            const Tensor& s = D.tensors[i];
            std::vector<WittVec> st;
            for (auto& x : W.sections[i]) st.push_back(frobenius_to(x, mm));
            const auto lhs = apply(F, Vt, s, st);
            const auto t = truncate_all(W.sections[i], mm);
            const i64 pk = ipow(p, s.n + s.weight);
            for (size_t k = 0; k < t.size(); ++k)
                if (!(lhs[k] == t[k].times_int(pk))) {
                    rep.frobenius_equivariant = false;
                    break;
                }
        }
    }
    return rep;
}

// ------------------------------------------------------------ relative display group

bool in_relative_display_group(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D, const PDThickening& T) {
    if (g.g.zero().ring() != T.B()) return false;
    for (int i = 0; i < D.d; ++i)
        for (int j = D.d; j < D.h; ++j)
            if (!T.in_kernel(w0(g.g(i, j)))) return false;
    return is_invertible(g.g) && fixes_tensors(g.g, D);
}

WMat sigma_of(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D, const PDThickening& T) {
    const int m = g.length();
    RingPtr B = T.B();
    if (g.g.zero().ring() != B) throw std::invalid_argument("relative sigma: element not over B");
    WMat s(D.h, D.h, WittVec::zero(B, m));
    for (int i = 0; i < D.h; ++i)
        for (int j = 0; j < D.h; ++j) {
            const WittVec& x = g.g(i, j);
            const int wi = D.mu[i], wj = D.mu[j];
            if (wi == 0 && wj == 1) {
                // x = w + log^{-1}[x_0, 0, ...] with w in I(B); sigma_1 kills the J-part.
                std::vector<Elem> log(static_cast<size_t>(m) + 1, B->zero());
                log[0] = x[0];
                s(i, j) = verschiebung_inverse(x - pd_log_inv(T, log));
            } else {
                WittVec fx = frobenius_to(x, m);
                s(i, j) = (wi == 1 && wj == 0) ? fx.times_int(B->p()) : fx;
            }
        }
    return s;
}

WMat mu_action(const WMat& U, const DisplayGroupElement& h, const HodgeEmbeddingDatum& D, const PDThickening& T) {
    if (U.zero().length() != h.length()) throw PrecisionError("mu_action: h must have Witt length one more than U");
    return inverse(tau_of(h)) * U * sigma_of(h, D, T);
}

// ------------------------------------------------------------ lift matching

EMat residue_twisted_operator(const EMat& u, const HodgeEmbeddingDatum& D) {
    const int d = D.d, c = D.h - D.d;
    const EMat ui = inverse(u);
    EMat M(d * c, d * c, u.zero());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < c; ++j)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < c; ++b) M(i * c + j, a * c + b) = u(i, a) * ui(d + b, d + j);
    return M;
}

bool twisted_nilpotent(const EMat& M) {
    if (M.rows() == 0) return true;
    RingPtr A = M.zero().ring();
    const int p = A->p();
    const int bound = M.rows() * A->nilpotency_index() + 1;
    EMat P = M, Mk = M;
    for (int k = 1; k <= bound; ++k) {
        if (P.is_zero()) return true;
        Mk = Mk.map([p](const Elem& x) { return x.pow(static_cast<std::uint64_t>(p)); });
        P = P * Mk;
    }
    return P.is_zero();
}

DisplayGroupElement match_lifts(const WMat& U1, const WMat& U2, const HodgeEmbeddingDatum& D, const PDThickening& T) {
    if (T.rule() != PDRule::SquareZero) throw std::invalid_argument("match_lifts: the kernel must be square-zero with trivial divided powers");
    RingPtr B = T.B(), A = T.A();
    if (A->char_exp() != 1) throw std::invalid_argument("match_lifts: the base A must have characteristic p");
    if (U1.zero().ring() != B || U2.zero().ring() != B) throw std::invalid_argument("match_lifts: lifts must be over B");
    const int m = U1.zero().length();
    if (U2.zero().length() != m) throw std::invalid_argument("match_lifts: lifts of different Witt lengths");
    const RingHom red = RingHom::reduction(B, A);
    const WMat Ubar = w_map(red, U2);
    if (!(w_map(red, U1) == Ubar)) throw std::invalid_argument("match_lifts: the lifts reduce to different displays");

    if (!twisted_nilpotent(residue_twisted_operator(w_ghost0(Ubar), D)))
        throw NonConvergence("match_lifts: the residue twisted operator is not nilpotent (reduction not adjoint nilpotent)");

    // X over W(J), W(J)^2 = 0: tau(1+X)^{-1} = 1 - X, so the condition is the
    // linear fixed point X = (U2 - U1) U2^{-1} + U2 sigma(X) U2^{-1}.
    const WMat U2inv = inverse(U2);
    const WMat E = (U2 - U1) * U2inv;
    const WMat I1 = WMat::identity(D.h, WittVec::zero(B, m + 1));
    const WMat I0 = WMat::identity(D.h, WittVec::zero(B, m));
    WMat X(D.h, D.h, WittVec::zero(B, m + 1));
    bool converged = false;
    for (int it = 0; it <= m + 1; ++it) {
        const WMat S = sigma_of(DisplayGroupElement{I1 + X}, D, T) - I0;
        WMat Xn = w_pad(E + U2 * S * U2inv, m + 1);
        if (Xn == X) {
            converged = true;
            break;
        }
        X = std::move(Xn);
    }
    if (!converged) throw NonConvergence("match_lifts: fixed-point iteration did not stabilize");
    DisplayGroupElement h{I1 + X};
    if (!(mu_action(U2, h, D, T) == U1)) throw std::logic_error("match_lifts: solution fails substitution");
    return h;
}

// ------------------------------------------------------------ quasi-isogenies

QuasiIsogenyReport quasi_isogeny_check(const QuasiIsogeny& q, const WMat& U, const WMat& Uprime, const HodgeEmbeddingDatum& D) {
    const int m = U.zero().length();
    if (Uprime.zero().length() != m || q.g.zero().length() != m) throw std::invalid_argument("quasi-isogeny: Witt lengths differ");
    if (q.exp < 0) throw std::invalid_argument("quasi-isogeny: exponent must be >= 0");
    RingPtr R = U.zero().ring();
    if (!R->is_field()) throw std::invalid_argument("quasi-isogeny: base must be a finite field");
    RingPtr G = R->galois_of_length(m);
    const int p = R->p();
    const EMat g = to_galois(q.g, m);
    const EMat b = framing_element(to_galois(U, m), D).A;
    const EMat bp = framing_element(to_galois(Uprime, m), D).A;

    QuasiIsogenyReport rep;
    const EMat sg = g.map([G](const Elem& x) { return G->frobenius(x); });
    rep.intertwines = g * b == bp * sg;

    // g^{-1} = A'/c0 with A' = -sum_{k>=1} c_k g^{k-1}, so p^{-e} g fixes s iff
    // (g^{(x)m} (x) A'^{t(x)n}) s = c0^n p^{e(m-n)} s, cleared of denominators.
    const auto c = charpoly(g);
    const Elem c0 = c[0];
    EMat Ap(D.h, D.h, G->zero()), gk = EMat::identity(D.h, G->zero());
    for (int k = 1; k <= D.h; ++k) {
        Ap = Ap - c[k] * gk;
        gk = gk * g;
    }
    const int v = G->valuation(c0);
    if (v >= m) throw PrecisionError("quasi-isogeny: determinant vanishes at working precision");
    const EMat Apt = Ap.transpose();
    rep.fixes_tensors = true;
    for (const Tensor& s : D.tensors) {
        const int shift = q.exp * (s.m - s.n);
        const int lhs_exp = shift < 0 ? -shift : 0, rhs_exp = shift > 0 ? shift : 0;
        if (v * s.n + rhs_exp >= m || lhs_exp >= m)
            throw PrecisionError("quasi-isogeny: tensor comparison is vacuous at Witt length " + std::to_string(m));
        const auto vec = tensor_in(G, s);
        const auto lhs = tensor_action(g, Apt, s.m, s.n, vec);
        const Elem ls = G->from_int(ipow(p, lhs_exp));
        const Elem rs = c0.pow(static_cast<std::uint64_t>(s.n)) * G->from_int(ipow(p, rhs_exp));
        for (size_t i = 0; i < vec.size(); ++i)
            if (!(ls * lhs[i] == rs * vec[i])) {
                rep.fixes_tensors = false;
                break;
            }
        if (!rep.fixes_tensors) break;
    }
    return rep;
}

}  // namespace wdk
