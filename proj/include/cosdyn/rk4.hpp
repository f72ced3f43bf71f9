#pragma once

#include <type_traits>

namespace cosdyn {

/// Classic fourth-order Runge-Kutta step for y' = f(y).
/// f maps a State to a rate R; needs State + R, R + R and double * R.
template <class State, class Rhs>
State rk4_step(const State& y, double dt, Rhs&& f) {
    using Rate = std::decay_t<decltype(f(y))>;
    const Rate k1 = f(y);
    const Rate k2 = f(State(y + (0.5 * dt) * k1));
    const Rate k3 = f(State(y + (0.5 * dt) * k2));
    const Rate k4 = f(State(y + dt * k3));
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace cosdyn
