#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace frontlab {

/// One named, version-controlled experiment config.
struct CatalogEntry {
    std::string_view name;
    std::string_view text;
};

/// The experiment catalog: named reference runs covering wide and narrow
/// gaussian bumps and tanh steps, front pinning, full-vs-reduced model
/// comparisons, the pinning-onset bisections and the defect
/// reconstruction run.
inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"fig1", R"(# adiabatic passage over a wide bump
name = fig1
mode = pde
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 0.6
defect.d = 30
reaction.a = 0.3
solver.t_max = 500
)"},
        {"fig2", R"(# passage over a narrow bump: slow down, then overshoot
name = fig2
mode = pde
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 0.6
defect.d = 0.3
reaction.a = 0.3
solver.t_max = 400
)"},
        {"fig3", R"(# pinning on a large narrow bump
name = fig3
mode = pde
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 7
defect.d = 0.3
reaction.a = 0.3
solver.t_max = 360
)"},
        {"fig4", R"(# adiabatic passage over a wide step
name = fig4
mode = pde
defect.kind = tanh
defect.s_l = 0.3
defect.s_r = 1
defect.d = 10
reaction.a = 0.3
solver.t_max = 300
)"},
        {"fig5", R"(# passage over a narrow step
name = fig5
mode = pde
defect.kind = tanh
defect.s_l = 0.3
defect.s_r = 1
defect.d = 0.1
reaction.a = 0.3
grid.n = 8000
solver.t_max = 300
)"},
        {"fig6", R"(# point-defect source terms vs the reduced coordinate
name = fig6
mode = sources
reaction.a = 0.3
)"},
        {"fig7", R"(# step-defect source terms vs the reduced coordinate
name = fig7
mode = sources
reaction.a = 0.3
)"},
        {"fig8", R"(# full equation vs adiabatic reduction, wide step
name = fig8
mode = compare
defect.kind = tanh
defect.s_l = 0.3
defect.s_r = 1
defect.d = 10
reaction.a = 0.3
cv.kind = adiabatic
solver.t_max = 300
)"},
        {"fig8-gaussian", R"(# full equation vs adiabatic reduction, wide bump
name = fig8-gaussian
mode = compare
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 0.6
defect.d = 30
reaction.a = 0.3
cv.kind = adiabatic
solver.t_max = 280
)"},
        {"fig9", R"(# full equation vs two-moment quadrature model, wide step
name = fig9
mode = compare
defect.kind = tanh
defect.s_l = 0.3
defect.s_r = 1
defect.d = 10
reaction.a = 0.3
cv.kind = general
solver.t_max = 300
)"},
        {"fig10", R"(# full equation vs point-defect model, pinning amplitude
name = fig10
mode = compare
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 5
defect.d = 0.3
reaction.a = 0.3
cv.kind = dirac
solver.t_max = 260
)"},
        {"fig10-weak", R"(# full equation vs point-defect model, small amplitude
name = fig10-weak
mode = compare
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 0.6
defect.d = 0.3
reaction.a = 0.3
cv.kind = dirac
solver.t_max = 400
)"},
        {"fig11", R"(# full equation vs step-defect model, narrow step
name = fig11
mode = compare
defect.kind = tanh
defect.s_l = 0.3
defect.s_r = 1
defect.d = 0.1
reaction.a = 0.3
cv.kind = heaviside
grid.n = 8000
solver.t_max = 300
)"},
        {"fig12", R"(# full equation vs step-defect model, pinning step
name = fig12
mode = compare
defect.kind = tanh
defect.s_l = 0.3
defect.s_r = 8
defect.d = 0.1
reaction.a = 0.3
cv.kind = heaviside
grid.n = 8000
solver.t_max = 220
)"},
        {"inverse", R"(# defect topography reconstruction from the fitted front
name = inverse
mode = invert
defect.kind = gaussian
defect.s0 = 0.6
defect.s1 = 0.3
defect.d = 10
reaction.a = 0.3
solver.t_max = 170
)"},
        {"threshold-gaussian", R"(# pinning onset of the full equation, narrow bump amplitude
name = threshold-gaussian
mode = pinning-threshold
defect.kind = gaussian
defect.s0 = 0.3
defect.s1 = 7
defect.d = 0.1
reaction.a = 0.3
threshold.parameter = defect.s1
threshold.lo = 6.5
threshold.hi = 9
threshold.model = pde
solver.t_max = 1000
)"},
        {"threshold-dirac", R"(# pinning onset of the point-defect reduction
name = threshold-dirac
mode = pinning-threshold
defect.kind = dirac
defect.alpha = 0.3
defect.beta = 6
reaction.a = 0.3
cv.kind = dirac
threshold.parameter = defect.beta
threshold.lo = 4
threshold.hi = 8
threshold.model = cv
init.x0 = -12
solver.t_max = 1200
)"},
    };
    return entries;
}

inline const CatalogEntry* find_catalog_entry(std::string_view name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace frontlab
