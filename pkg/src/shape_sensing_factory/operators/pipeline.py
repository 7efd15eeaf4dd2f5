"""Chained stages: one full run, and repeated runs over seeds and sensor counts."""
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import AnalyzeOptions, EstimateOptions, SimulateOptions
from shape_sensing_factory.factory.utils.logging import log_action
from shape_sensing_factory.operators.analyze import AnalyzeOperator
from shape_sensing_factory.operators.estimate import EstimateOperator
from shape_sensing_factory.operators.simulate import SimulateOperator


def run_pipeline(
    scenario: ScenarioConfig,
    out_dir: str,
    workers: int,
    analytic: bool = False,
    context=None,
) -> Dict[str, Any]:
    """simulate -> analyze -> estimate, handing products over in memory; every stage still writes its files."""
    sim = None
    traces = None
    if not analytic:
        sim = SimulateOperator().execute(context, scenario, SimulateOptions(out_dir=out_dir, workers=workers))
        traces = sim["result"]
    ana = AnalyzeOperator().execute(
        context, scenario, AnalyzeOptions(out_dir=out_dir, workers=workers, analytic=analytic), traces=traces
    )
    est = EstimateOperator().execute(
        context, scenario, EstimateOptions(out_dir=out_dir, workers=workers), observations=ana["result"]
    )
    return {"simulate": sim, "analyze": ana, "estimate": est}


def _run_rows(n_s: int, seed: int, evaluation: Optional[Dict[str, Any]]) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    success = bool(evaluation) and not evaluation["type_one_error"]
    run = {"n_s": n_s, "seed": seed, "type_one_success": success}
    values = []
    if success:
        for kind in ("lengths", "angles"):
            for row in evaluation[kind]:
                values.append(
                    {"n_s": n_s, "seed": seed, "kind": kind, "truth": row["truth"], "estimate": row["estimate"]}
                )
    return run, values


def summarize_sweep(runs: pd.DataFrame, values: pd.DataFrame) -> pd.DataFrame:
    """
    Per sensor count and true value: share of runs with the right class counts,
    normalized standard deviation and relative bias over the successful runs.
    """
    success = runs.groupby("n_s")["type_one_success"].mean().rename("success_ratio").reset_index()
    if values.empty:
        success["kind"] = None
        return success
    grouped = values.groupby(["n_s", "kind", "truth"])["estimate"]
    stats = grouped.agg(["mean", "std", "count"]).reset_index()
    stats["normalized_std"] = stats["std"].fillna(0.0) / stats["mean"]
    stats["bias"] = (stats["mean"] - stats["truth"]) / stats["truth"]
    return stats.merge(success, on="n_s", how="left")


def run_sweep(
    scenario: ScenarioConfig,
    seeds: Sequence[int],
    n_s_values: Sequence[int],
    out_dir: str,
    workers: int,
    analytic: bool = False,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Repeat the pipeline per (n_s, seed); returns the per-run table and the summary."""
    runs, values = [], []
    for n_s in n_s_values:
        for seed in seeds:
            variant = scenario.model_copy(update={"seed": seed, "n_s": n_s})
            result = run_pipeline(variant, os.path.join(out_dir, f"n{n_s}_seed{seed}"), workers, analytic)
            run, vals = _run_rows(n_s, seed, result["estimate"]["result"].evaluation)
            runs.append(run)
            values.extend(vals)
            log_action("SWEEP_RUN", n_s=n_s, seed=seed, success=run["type_one_success"])
    runs_df = pd.DataFrame(runs, columns=["n_s", "seed", "type_one_success"])
    values_df = pd.DataFrame(values, columns=["n_s", "seed", "kind", "truth", "estimate"])
    return runs_df, summarize_sweep(runs_df, values_df)
