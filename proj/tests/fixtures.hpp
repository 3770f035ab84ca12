#pragma once

#include "twlab/auxsys.hpp"
#include "twlab/painleve2.hpp"

// Shared solutions, built once per test binary.
namespace fixtures {

inline const twlab::p2::Painleve2Solution& hm() {
    static const auto s = twlab::p2::solve_hastings_mcleod(-12.0, 8.0, 4001, 1e-11);
    return s;
}

inline const twlab::aux::AuxSolution& aux_linear() {
    static const auto a = twlab::aux::solve(hm(), 8.0, -12.0, 1e-12);
    return a;
}

inline const twlab::aux::AuxSolution& aux_nonlinear() {
    static const auto a = [] {
        twlab::aux::AuxOptions o;
        o.route = twlab::aux::Route::Nonlinear;
        return twlab::aux::solve(hm(), 8.0, -12.0, 1e-12, o);
    }();
    return a;
}

// reaches internal t = 12, enough for external arguments up to 4
inline const twlab::p2::Painleve2Solution& hm_wide() {
    static const auto s = twlab::p2::solve_hastings_mcleod(-12.0, 12.0, 4801, 1e-11);
    return s;
}

inline const twlab::aux::AuxSolution& aux_wide() {
    static const auto a = twlab::aux::solve(hm_wide(), 12.0, -12.0, 1e-12);
    return a;
}

}  // namespace fixtures
