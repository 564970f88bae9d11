// Samples a few trajectories of the physical diffusion for the upwelling
// shelf-break medium and prints them as CSV (one column per path).

#include <cstdio>
#include <vector>

#include "interface_lab/functionals.hpp"
#include "interface_lab/sbm.hpp"

int main() {
    using namespace interface_lab;
    // Bottom friction r, Coriolis f < 0, bottom slopes on either side of the break.
    const auto m = medium_from_upwelling(1.0, -1.0, 2.0, 0.5);
    std::printf("# D+=%g D-=%g alpha*=%g\n", m.d_plus(), m.d_minus(), m.alpha_star());

    const int n_paths = 4;
    std::vector<std::vector<double>> ys;
    for (int i = 0; i < n_paths; ++i) {
        RngStream rng(2024, static_cast<std::uint64_t>(i));
        const auto path = physical_path(m, 0.0, 0.01, 2.0, rng);
        const auto occ = occupation_times(path, m);
        std::fprintf(stderr, "path %d: time on y>=0 %.3f of %.3f\n", i, occ.gamma_plus_leb, occ.horizon);
        ys.push_back(path.y_values(m));
    }
    std::printf("t");
    for (int i = 0; i < n_paths; ++i) std::printf(",y%d", i);
    std::printf("\n");
    for (std::size_t k = 0; k < ys.front().size(); k += 10) {
        std::printf("%.2f", 0.01 * static_cast<double>(k));
        for (const auto& y : ys) std::printf(",%.5f", y[k]);
        std::printf("\n");
    }
}
