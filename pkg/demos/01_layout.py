"""Walk the distance-3 patch: qubits, checks, CZ layers, cycle timing."""

from surflab import Layout
from surflab.surface import CYCLE_NS, PATTERNS, T_1Q_NS, T_2Q_NS, T_WINDOW_NS

layout = Layout.build(3)

print(layout.ascii_diagram())
print()
print(f"{len(layout.data)} data qubits, {len(layout.ancillas)} measure qubits")
print()

# every ancilla checks the parity of its neighbouring data qubits
for anc in layout.ancillas:
    members = ", ".join(layout.support[anc.name])
    print(f"  {anc.name}: {anc.kind}-type check on {members}")

print()
print("logical Z runs along the top row:  ", ", ".join(layout.logical_support("Z")))
print("logical X runs down the left column:", ", ".join(layout.logical_support("X")))
print()

# the CZ schedule touches each (ancilla, data) coupling exactly once per cycle,
# in four parallel layers
for p in PATTERNS:
    pairs = layout.pattern_pairs(p)
    print(f"layer {p}: {len(pairs)} CZs  " + "  ".join(f"{a}-{d}" for a, d in pairs))

print()
print(
    f"cycle = 5 x {T_1Q_NS:.0f} ns (1Q slots) + 4 x {T_2Q_NS:.0f} ns (CZ slots)"
    f" + {T_WINDOW_NS:.0f} ns (measurement window) = {CYCLE_NS:.0f} ns"
)
