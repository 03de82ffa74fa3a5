#pragma once
// Displays over the Witt frame given by standard data, their Hodge
// filtrations and tensor products, and the equivalent language of windows
// with normal representations.

#include "wdk/frames.hpp"

namespace wdk {

// Standard datum (L, Phi): basis degrees in basis order and the matrix of the
// sigma-linear automorphism Phi over W_m(R).
struct Display {
    std::vector<int> degrees;
    WMat phi;

    RingPtr ring() const { return phi.zero().ring(); }
    int length() const { return phi.zero().length(); }
    int rank() const { return static_cast<int>(degrees.size()); }
};

Display display_from_standard_datum(std::vector<int> degrees, const WMat& phi);
Display unit_display(RingPtr R, int m);

// Fil^n as the set of basis indices of M-bar spanning it, for every n from
// min degree to max degree + 1.
struct HodgeFiltration {
    int lowest = 0;
    std::vector<std::vector<int>> levels;  // levels[i] = Fil^{lowest + i}
    std::vector<int> all, none;
    const std::vector<int>& fil(int n) const;
};

HodgeFiltration hodge_filtration(const Display& D);
// The filtration sum_{j+k=n} Fil^j(D1) (x) Fil^k(D2) on the Kronecker basis.
HodgeFiltration tensor_filtration(const HodgeFiltration& F1, int rank1, const HodgeFiltration& F2, int rank2);
Display tensor_displays(const Display& D1, const Display& D2);
Display base_change_display(const Display& D, const RingHom& f);

// Normal representation (L0, L1, Psi) with P = L0 + L1, Fil P = I L0 + L1.
struct Window {
    int rank0 = 0, rank1 = 0;
    WMat psi;

    int rank() const { return rank0 + rank1; }
};

Window display_to_window(const Display& D);
Display window_to_display(const Window& W);
WMat f0_sharp(const Window& W);
WMat v_sharp(const Window& W);
// Nilpotence of V-sharp modulo I(R) + pW(R), decided by a bounded twisted power.
bool zink_nilpotence(const Window& W);

}  // namespace wdk
