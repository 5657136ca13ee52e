#pragma once

#include "oxc/topology.hpp"

namespace oxc {

// Classical OXC Q(N,w): N 1xN WSSs, the N^2 fibers of S(N), N Nx1 WSSs.
FabricTopology build_classical(int N, int w);

// Q': the classical fabric with S(N) replaced by the modular shuffle.
// Input WSS p becomes (a,p'), output WSS q becomes (b,q').
FabricTopology phase1_substitute(int N, int n, int r, int w);

// Q'': every 1xN WSS becomes a 1xn WSS cascaded into n 1xr WSSs (a,p',b);
// every Nx1 WSS becomes n rx1 WSSs (b,q',a) feeding an nx1 WSS.
// Wiring is derived from the fibers of `prime`, so faults carry through.
FabricTopology phase2_decompose(const FabricTopology& prime);

// Q-hat: each S_ab(r) with its 1xr and rx1 WSSs becomes module Q_ab(r).
// Unsealed modules keep their internal WSSs and r^2 fibers as graph
// elements; sealed modules are opaque.
FabricTopology phase3_merge(const FabricTopology& double_prime, BuildOptions options = {});

FabricTopology build_modular(int n, int r, int w, BuildOptions options = {});

// Builds any stage from parameters (classical ignores n and r).
FabricTopology build_stage(Stage stage, const FabricParams& params, BuildOptions options = {});

}  // namespace oxc
