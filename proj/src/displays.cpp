#include "wdk/displays.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace wdk {

Display display_from_standard_datum(std::vector<int> degrees, const WMat& phi) {
    if (!phi.is_square() || phi.rows() != static_cast<int>(degrees.size()))
        throw std::invalid_argument("standard datum: Phi must be square of size rank L");
    if (!is_invertible(phi)) throw NotInvertible("standard datum: Phi is not invertible over W(R)");
    return Display{std::move(degrees), phi};
}

Display unit_display(RingPtr R, int m) { return Display{{0}, WMat::identity(1, WittVec::zero(R, m))}; }

const std::vector<int>& HodgeFiltration::fil(int n) const {
    if (n < lowest) return all;
    if (n - lowest >= static_cast<int>(levels.size())) return none;
    return levels[n - lowest];
}

HodgeFiltration hodge_filtration(const Display& D) {
    HodgeFiltration H;
    if (D.degrees.empty()) return H;
    auto [lo, hi] = std::minmax_element(D.degrees.begin(), D.degrees.end());
    H.lowest = *lo;
    H.all.resize(D.degrees.size());
    std::iota(H.all.begin(), H.all.end(), 0);
    for (int n = *lo; n <= *hi + 1; ++n) {
        std::vector<int> idx;
        for (int i = 0; i < D.rank(); ++i)
            if (D.degrees[i] >= n) idx.push_back(i);
        H.levels.push_back(idx);
    }
    return H;
}

HodgeFiltration tensor_filtration(const HodgeFiltration& F1, int r1, const HodgeFiltration& F2, int r2) {
    HodgeFiltration H;
    H.all.resize(static_cast<size_t>(r1) * r2);
    std::iota(H.all.begin(), H.all.end(), 0);
    const int lo1 = F1.lowest, hi1 = lo1 + static_cast<int>(F1.levels.size());
    const int lo2 = F2.lowest, hi2 = lo2 + static_cast<int>(F2.levels.size());
    H.lowest = lo1 + lo2;
    for (int n = lo1 + lo2; n <= hi1 + hi2 - 1; ++n) {
        std::set<int> span;
        for (int j = lo1; j <= hi1; ++j) {
            const int k = n - j;
            for (int a : F1.fil(j))
                for (int b : F2.fil(k)) span.insert(a * r2 + b);
        }
        H.levels.emplace_back(span.begin(), span.end());
    }
    return H;
}

Display tensor_displays(const Display& D1, const Display& D2) {
    if (D1.ring() != D2.ring() || D1.length() != D2.length()) throw std::invalid_argument("tensor_displays: frame mismatch");
    Display D;
    for (int a : D1.degrees)
        for (int b : D2.degrees) D.degrees.push_back(a + b);
    D.phi = kron(D1.phi, D2.phi);
    return D;
}

Display base_change_display(const Display& D, const RingHom& f) { return Display{D.degrees, w_map(f, D.phi)}; }

Window display_to_window(const Display& D) {
    std::vector<int> order;
    for (int target : {0, 1})
        for (int i = 0; i < D.rank(); ++i)
            if (D.degrees[i] == target) order.push_back(i);
    if (static_cast<int>(order.size()) != D.rank()) throw std::invalid_argument("display_to_window: degrees must lie in {0, 1}");
    Window W;
    W.rank0 = static_cast<int>(std::count(D.degrees.begin(), D.degrees.end(), 0));
    W.rank1 = D.rank() - W.rank0;
    W.psi = WMat(D.rank(), D.rank(), D.phi.zero());
    for (int i = 0; i < D.rank(); ++i)
        for (int j = 0; j < D.rank(); ++j) W.psi(i, j) = D.phi(order[i], order[j]);
    return W;
}

Display window_to_display(const Window& W) {
    std::vector<int> deg(W.rank0, 0);
    deg.resize(W.rank(), 1);
    return Display{deg, W.psi};
}

namespace {

WMat weight_diagonal(const Window& W, bool p_on_L0) {
    const WittVec& z = W.psi.zero();
    WittVec p = WittVec::from_int(z.ring(), z.length(), z.ring()->p()), one = WittVec::one(z.ring(), z.length());
    std::vector<WittVec> d;
    for (int i = 0; i < W.rank(); ++i) d.push_back((i < W.rank0) == p_on_L0 ? p : one);
    return WMat::diagonal(d, z);
}

}  // namespace

WMat f0_sharp(const Window& W) { return W.psi * weight_diagonal(W, false); }

WMat v_sharp(const Window& W) { return weight_diagonal(W, true) * inverse(W.psi); }

bool zink_nilpotence(const Window& W) {
    RingPtr R = W.psi.zero().ring();
    RingPtr Rp = R->mod_p();
    RingHom red = RingHom::reduction(R, Rp);
    const EMat V = e_map(red, w_ghost0(v_sharp(W)));
    const int h = W.rank();
    if (h == 0) return true;
    const int N = h * (Rp->nilpotency_index() + 1);
    // V^{(p^{N-1})} ... V^{(p)} V with x -> x^p applied entrywise
    EMat twist = V, acc = V;
    const auto frob = [&](const Elem& a) { return a.pow(static_cast<std::uint64_t>(R->p())); };
    for (int k = 1; k < N; ++k) {
        twist = twist.map(frob);
        acc = twist * acc;
        if (acc.is_zero()) return true;
    }
    return acc.is_zero();
}

}  // namespace wdk
