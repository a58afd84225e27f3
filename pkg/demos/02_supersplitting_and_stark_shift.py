"""Pump-power effects on the dressed polaritons.

Increasing the pump strength J1 first AC-Stark-shifts the two-photon
feature of the second manifold and then, once the pump Rabi frequency
exceeds the polariton linewidth, splits the driven polariton resonance
itself into a doublet ("supersplitting").  This script traces both
effects with reduced grids so it finishes in about a minute.

Run:  python3 demos/02_supersplitting_and_stark_shift.py
"""

from bichrome.scenarios import (
    ScenarioConfig,
    SweepSpec,
    detect_knee,
    resonant_strong_coupling_params,
    second_manifold_feature,
    supersplitting_curve,
)
from bichrome.spectra import find_extrema


def main():
    print("supersplitting of the driven lower polariton")
    print("  J1/GHz  peaks  separation/GHz")
    for j1 in (1.0, 1.5, 2.0, 2.5, 3.0):
        params = resonant_strong_coupling_params(j1=j1)
        offsets, sweep = supersplitting_curve(params, points=161)
        peaks = sorted(
            [e for e in find_extrema(offsets, sweep.deviation) if e.kind == "peak"],
            key=lambda e: -e.value,
        )[:2]
        locs = sorted(e.location for e in peaks)
        sep = locs[1] - locs[0] if len(locs) == 2 else 0.0
        print(f"  {j1:5.2f}  {len(peaks):5d}  {sep:10.3f}")

    print()
    print("AC Stark shift of the second-manifold feature")
    print("  J1/GHz  position/GHz")
    track = []
    center = None
    for j1 in [1.0 + 0.5 * k for k in range(13)]:
        params = resonant_strong_coupling_params(j1=j1)
        if center is None:
            center = -(2.0**0.5 - 1.0) * params.g
        feat = second_manifold_feature(params, center, points=101)
        if feat is None:
            continue
        center = feat.location
        track.append((j1, center))
        print(f"  {j1:5.2f}  {center:10.3f}")

    knee = detect_knee(track)
    print(f"knee of the shift-vs-pump curve: J1 = {knee:.2f} GHz"
          if knee is not None else "no knee detected")


if __name__ == "__main__":
    main()
