"""
From counts to a verdict
========================

Simulate the two spin-1 settings, save the counts in the dataset format,
read them back and evaluate the relation from the data alone.
"""
import tempfile
from pathlib import Path

from lurwitness import ingest
from lurwitness.lur import builtin_spec, evaluate
from lurwitness.states import noise_model_state

spec = builtin_spec("spin1_xy")
rho = noise_model_state(0.69)

exact = ingest.simulate(rho, spec)
print("outcome probabilities in the dataset:", exact.n_outcomes)
print("C_LUR from exact probabilities:", ingest.evaluate_from_data(exact, spec).c_lur)
print("C_LUR from the density matrix: ", evaluate(rho, spec).c_lur)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "counts.json"
    for shots in (100, 10_000, 1_000_000):
        ingest.save(ingest.simulate(rho, spec, shots=shots, seed=7), path)
        r = ingest.evaluate_from_data(ingest.load(path, spec), spec)
        print(f"{shots:>9d} shots per setting: total {r.total:.5f}  margin {r.margin:+.5f}  {r.verdict}")
