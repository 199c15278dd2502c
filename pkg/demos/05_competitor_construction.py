#!/usr/bin/env python3
"""End-to-end competitor construction.

From a far-ball certificate the offset ball is enlarged to weighted volume
exactly omega_N while the weighted perimeter stays below the Euclidean value
N omega_N.  Radial weights use the rotation sweep; general weights run the
sweep at every angle of a working circle and select a certified direction
through the volume-matching advance map.

Two regimes are shown: a nearby offset where the deficit is numerically
resolvable, and the far regime where the construction degenerates to the
plain ball whose margin survives only in deficit space.
"""

import math

import numpy as np

from isoplab import build_competitor, density_from_config, unit_ball_volume

print("=" * 72)
print("resolvable regime: radial exponential weight, offsets from 8")
print("=" * 72)
exp2 = density_from_config({"family": "radial_exp", "dim": 2, "a": 1.0})
cert = build_competitor(exp2, eps=0.05, R_min=8.0, R_max=40.0,
                        mc_samples=100_000)
E = cert.E
om = unit_ball_volume(2)
print(f"  set: {type(E).__name__} at offset {E.offset}, sweep angle "
      f"{getattr(E, 'delta', 0.0):.3e}")
print(f"  volume gap |E|_f - omega_2 = {cert.volume_gap:+.3e} "
      f"(tolerance {1e-8 * om:.1e})")
print(f"  perimeter margin 2 pi - P_f = {cert.perimeter_margin:.6e} "
      f"(strict = {cert.strict})")
print(f"  mean density rho = {cert.rho:.10f}")
print(f"  advance bound ok = {cert.bounds['match_bound_ok']}")
print(f"  Monte-Carlo re-check: volume ok = {cert.mc_check['volume_consistent']},"
      f" perimeter ok = {cert.mc_check['perimeter_consistent']}")

print("\nangular modulation at a resolvable offset (advance map in action):")
amod = density_from_config({"family": "angular_mod", "dim": 2, "a": 1.0,
                            "params": {"eta": 0.5, "k": 1, "c": 0.5}})
cert = build_competitor(amod, eps=0.05, R_min=12.0, R_max=40.0,
                        circle_grid=90, nodes=48, mc_samples=100_000)
q = cert.advance.quotients()
adv = np.asarray(cert.advance.advance)
print(f"  set: {type(cert.E).__name__}, rho = {cert.rho:.10f}")
print(f"  advance range over the circle: [{adv.min():.3e}, {adv.max():.3e}]")
print(f"  difference quotients in [{q.min():.6f}, {q.max():.6f}] "
      f"(band [0.95, {1/0.95:.6f}])")
print(f"  perimeter margin = {cert.perimeter_margin:.6e}")

print("\nfar regime (offsets >= 50): the deficit ~ exp(-50) is below the")
print("volume-matching tolerance, the plain ball is returned, and the")
print("strict margin is visible only in deficit space:")
cert = build_competitor(exp2, eps=0.05, R_min=50.0, R_max=200.0,
                        mc_samples=20_000)
print(f"  set: {type(cert.E).__name__} at offset {cert.E.offset}")
print(f"  volume gap = {cert.volume_gap:+.3e}")
print(f"  perimeter margin = {cert.perimeter_margin:.3e} "
      f"(strict = {cert.strict})")
print(f"  rho = {cert.rho!r} (indistinguishable from 1 in f-space floats)")
