"""Run every shipped config plus the CHSH and B_lg sweeps into one output tree.

    python3 scripts/reproduce_figures.py [out_dir]
"""

import sys
from pathlib import Path

import numpy as np

from catbell.scenarios import load_config, run_scenario, sweep, sweep_curves, write_result, ScenarioResult

ROOT = Path(__file__).resolve().parents[1]


def main(out: Path) -> None:
    for cfg_path in sorted((ROOT / "configs").glob("*.cfg")):
        if cfg_path.stem == "bad":
            continue
        cfg = load_config(cfg_path)
        res = run_scenario(cfg)
        write_result(res, out / cfg_path.stem)
        for rep in res.reports:
            print(f"{cfg_path.stem:18s} {rep.kind:5s} {rep.aggregate: .6f} converged={rep.converged}")

    amps = [round(v, 4) for v in np.linspace(0.25, 3.0, 12)]
    for stem, param in (("bell3", "amplitude"), ("lg_bipartite3", "amplitude")):
        cfg = load_config(ROOT / "configs" / f"{stem}.cfg", ["check_convergence=false"])
        results = sweep(cfg, param, amps)
        write_result(ScenarioResult(cfg.scenario_id), out / f"sweep_{stem}", extra=sweep_curves(results, param, amps))
        print(f"sweep {stem}: wrote {out / f'sweep_{stem}'}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "catbell_out")
