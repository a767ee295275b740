"""Regenerate tests/data/golden_sweep.csv from the current implementation.

Run this only when the estimator or CSV contract changes on purpose, and
eyeball the diff before committing it.
"""

from pathlib import Path

from mlqae import SweepConfig, curve_to_csv, run_sweep

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden_sweep.csv"

config = SweepConfig(
    a_targets=(1.0 / 6.0,),
    schedule_kind="eis",
    m_values=(0, 1, 2, 3),
    n_shot=30,
    repetitions=50,
    seed=13,
    nq_min=20.0,
    nq_max=500.0,
)

OUT.parent.mkdir(parents=True, exist_ok=True)
OUT.write_text(curve_to_csv(run_sweep(config)), encoding="utf-8", newline="\n")
print(f"wrote {OUT}")
