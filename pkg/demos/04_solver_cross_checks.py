"""Cross-validation of the continued-fraction solver.

Three independent checks:
  1. the weak-drive transmission spectrum against its closed form,
  2. steady-state saturation of a driven QD against the textbook value,
  3. the Floquet/continued-fraction average against brute-force
     time-domain integration of the same master equation.

Run:  python3 demos/04_solver_cross_checks.py
"""

import numpy as np

from bichrome.analytic import AnalyticParams, transmission_analytic
from bichrome.floquet import steady_state, time_averaged_observable
from bichrome.operators import SpaceOperators
from bichrome.params import DriveTarget, SystemParams
from bichrome.spectra import cavity_intensity, qd_population


def main():
    print("1. weak-drive transmission vs closed form")
    base = SystemParams(nu_c=0.0, nu_d=0.0, g=30.0, kappa=3.0, gamma=1.0,
                        gamma_d=0.0, gamma_r=0.0, j1=0.01, j2=0.0)
    ana = AnalyticParams.from_system(base)
    grid = np.linspace(-48.0, 48.0, 97)
    num = np.array([cavity_intensity(base.with_(nu_l=w)) for w in grid])
    ref = np.array([transmission_analytic(w, ana) for w in grid])
    scale = num @ ref / (num @ num)
    print(f"   max relative deviation: {np.abs(scale * num - ref).max() / ref.max():.2e}")

    print("2. driven-QD saturation vs J1^2 / (2 J1^2 + gamma (gamma + gamma_d))")
    p = SystemParams(nu_c=-50.0, nu_d=0.0, nu_l=0.0, g=0.0, kappa=4.0,
                     gamma=1.0, gamma_d=3.0, j1=1.75, j2=0.0,
                     drive_target=DriveTarget.QD)
    ops = SpaceOperators(p.hilbert)
    pop = np.trace(ops.qd_excited @ steady_state(p).rho_ss_matrix()).real
    expected = 1.75**2 / (2 * 1.75**2 + 4.0)
    print(f"   solver {pop:.12f}  formula {expected:.12f}")

    print("3. continued fractions vs time-domain integration")
    p = SystemParams(nu_c=0.0, nu_d=0.0, nu_l=0.0, g=5.0, kappa=3.0,
                     gamma=1.0, gamma_d=0.5, j1=0.8, j2=0.05, delta=1.5)
    ops = SpaceOperators(p.hilbert)
    for label, cf_val, op in (("<a^dag a>", cavity_intensity(p), ops.number),
                              ("rho_ee", qd_population(p), ops.qd_excited)):
        td_val = time_averaged_observable(p, op)
        print(f"   {label:10s} cf {cf_val:.10e}  time-domain {td_val:.10e}")


if __name__ == "__main__":
    main()
