// Survival (not-yet-arrived) probabilities for a tracer released at distance y
// on either side of a dispersion interface, from the interface PDE.
//
//   breakthrough_curves [d_plus d_minus y t_max]

#include <cstdio>
#include <cstdlib>

#include "interface_lab/pde.hpp"

int main(int argc, char** argv) {
    using namespace interface_lab;
    const double dp = argc > 1 ? std::atof(argv[1]) : 4.0;
    const double dm = argc > 2 ? std::atof(argv[2]) : 1.0;
    const double y = argc > 3 ? std::atof(argv[3]) : 1.0;
    const double t_max = argc > 4 ? std::atof(argv[4]) : 4.0;

    const auto m = make_medium(dp, dm, flux_continuity_lambda(dp, dm));
    const double far = default_far_width(m, t_max);
    const auto from_minus = survival_curve(m, -y, y, far, 1e-3, t_max, 0.02);
    const auto from_plus = survival_curve(m, y, -y, far, 1e-3, t_max, 0.02);

    std::printf("# D+=%g D-=%g lambda=%g alpha*=%g\n", m.d_plus(), m.d_minus(), m.lambda(), m.alpha_star());
    std::printf("t,survival_from_minus,survival_from_plus\n");
    for (double t = 0.0; t <= t_max + 1e-9; t += t_max / 16)
        std::printf("%g,%.6f,%.6f\n", t, from_minus.at(t), from_plus.at(t));
}
