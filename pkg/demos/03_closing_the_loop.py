"""Interconnection: feeding a plant's output through a coherent controller.

Three wirings of the same cavity plant:
  1. classical-only: homodyne the plant output directly,
  2. beam splitter: mix with vacuum and dual-homodyne both ports,
  3. squeezer with feedback: the controller returns a field to the plant.
"""

import numpy as np

from cke import (
    build_beam_splitter_controller,
    build_cavity_plant,
    build_squeezer_controller,
    classical_only,
    close_loop,
)

plant = build_cavity_plant(0.5, 0.5, 0.0)

print("== classical-only baseline ==")
base = classical_only(plant)
print("state half-widths (plant, controller):", base.state_half_widths)
print("noise channels:", base.noise_channels)
print("drive (both plant inputs become vacuum):\n", base.drive.real)

print("\n== beam splitter, no feedback ==")
splitter = build_beam_splitter_controller(np.pi / 4)
mixed = close_loop(plant, splitter)
print("plant dynamics are untouched:", np.allclose(mixed.drift, plant.drift))
print("measured channel half-width (two output ports):", mixed.measured_half_width)
print("noise channels:", mixed.noise_channels)

print("\n== squeezer with coherent feedback ==")
squeezer = build_squeezer_controller(5.0, 5.0, -0.5)
loop = close_loop(plant, squeezer)
print("joint drift (note the doubled effective decay of the plant block):")
print(loop.drift.real)
print("noise channels:", loop.noise_channels)
print("cost row extends the plant target by controller zeros:")
print(loop.cost_row.real)

print("\nper-subsystem stacking is re-sorted for structure checks:")
print("drift in global doubled ordering is structured:",
      np.allclose(loop.global_form("drift")[2:, :2],
                  loop.global_form("drift")[:2, 2:].conj()))
