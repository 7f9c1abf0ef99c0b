"""Admin command line: serve the API, validate data, generate and audit
levels, solve instances, and render study reports."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import analytics, levelgen, solver
from .catalog import load_catalog, validate_catalog
from .errors import FoodCalError
from .levelgen import WINNABILITY_TOL, generate_all_levels, level_from_dict, level_to_dict
from .prng import SplitMix64
from .requirements import Gender, load_requirement_table
from .service import DEFAULT_MASTER_SEED, DEFAULT_PORT, ServiceConfig, run_server
from .solver import SelectionConstraints


@click.group()
def main() -> None:
    """FoodCalorie game engine."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=None, type=int, help=f"listen port (default {DEFAULT_PORT})")
@click.option("--data-dir", default=None, help="profile store directory (default: in-memory)")
@click.option("--master-seed", default=None, type=int, help="level generation seed")
@click.option("--catalog", "catalog_path", default=None, help="catalog JSON override")
@click.option("--requirements", "requirements_path", default=None, help="requirement table override")
@click.option("--faithful", is_flag=True, help="disable the hint endpoint")
@click.option("--cors-origin", default=None, help="allow this origin for browser clients")
def serve(host, port, data_dir, master_seed, catalog_path, requirements_path, faithful, cors_origin) -> None:
    """Run the HTTP API server."""
    config = ServiceConfig.from_env()
    config.host = host
    if port is not None:
        config.port = port
    if data_dir is not None:
        config.data_dir = data_dir
    if master_seed is not None:
        config.master_seed = master_seed
    if catalog_path is not None:
        config.catalog_path = catalog_path
    if requirements_path is not None:
        config.requirements_path = requirements_path
    if cors_origin is not None:
        config.cors_origin = cors_origin
    config.faithful_mode = faithful
    click.echo(f"serving on http://{config.host}:{config.port}")
    run_server(config)


@main.command("validate-catalog")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--strict/--lenient", default=True, show_default=True,
              help="strict additionally checks the shipped item counts")
def validate_catalog_cmd(path, strict) -> None:
    """Validate a catalog file and report violations."""
    catalog = load_catalog(path, strict=False)
    violations = validate_catalog(catalog, strict=strict)
    if violations:
        for violation in violations:
            click.echo(f"violation: {violation}", err=True)
        raise SystemExit(1)
    click.echo(f"ok: {len(catalog.items)} items")


@main.command("gen-level")
@click.option("--age", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--catalog", "catalog_path", default=None)
@click.option("--requirements", "requirements_path", default=None)
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              help="write level JSON here instead of stdout")
def gen_level(age, seed, catalog_path, requirements_path, out) -> None:
    """Generate one level for an age from an explicit seed."""
    catalog = load_catalog(catalog_path)
    table = load_requirement_table(requirements_path)
    level = levelgen.generate_level(catalog, table, age, seed)
    text = json.dumps(level_to_dict(level), indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


@main.command("gen-all")
@click.option("--seed", required=True, type=int, help="master seed")
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--catalog", "catalog_path", default=None)
@click.option("--requirements", "requirements_path", default=None)
def gen_all(seed, out, catalog_path, requirements_path) -> None:
    """Generate every level and write one JSON file per level."""
    catalog = load_catalog(catalog_path)
    table = load_requirement_table(requirements_path)
    levels = generate_all_levels(catalog, table, seed)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for level in levels:
        path = out_dir / f"level_{level.level_number:03d}.json"
        path.write_text(json.dumps(level_to_dict(level), indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {len(levels)} levels to {out_dir}")


@main.command()
@click.option("--seeds", required=True, type=int, help="number of master seeds to sweep")
@click.option("--base-seed", default=DEFAULT_MASTER_SEED, show_default=True, type=int)
@click.option("--catalog", "catalog_path", default=None)
@click.option("--requirements", "requirements_path", default=None)
def audit(seeds, base_seed, catalog_path, requirements_path) -> None:
    """Winnability sweep: regenerate all levels for N master seeds and
    re-verify feasibility of every level for both genders."""
    catalog = load_catalog(catalog_path)
    table = load_requirement_table(requirements_path)
    constraints = SelectionConstraints()
    checked = failures = 0
    for i in range(seeds):
        master_seed = SplitMix64(base_seed + i).next_u64()
        for level in generate_all_levels(catalog, table, master_seed):
            for gender in Gender:
                pools = [[catalog.get(j) for j in w.item_ids] for w in level.windows_for(gender)]
                checked += 1
                if not solver.feasible(pools, constraints, level.target_for(gender), WINNABILITY_TOL):
                    failures += 1
                    click.echo(
                        f"UNWINNABLE: seed {master_seed} level {level.level_number} {gender.value}",
                        err=True,
                    )
    click.echo(f"checked {checked} gender-days across {seeds} seeds: {failures} failures")
    if failures:
        raise SystemExit(1)


@main.command()
@click.option("--level-file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--gender", required=True, type=click.Choice([g.value for g in Gender]))
@click.option("--catalog", "catalog_path", default=None)
def solve(level_file, gender, catalog_path) -> None:
    """Best plan for one gender of a level JSON file, with projected stars."""
    from .scoring import score_stars

    catalog = load_catalog(catalog_path)
    level = level_from_dict(json.loads(Path(level_file).read_text(encoding="utf-8")))
    parsed = Gender(gender)
    pools = [[catalog.get(i) for i in w.item_ids] for w in level.windows_for(parsed)]
    target = level.target_for(parsed)
    plan = solver.best_plan(pools, SelectionConstraints(), target)
    payload = {
        "gender": parsed.value,
        "target_kcal": target,
        "day_total_kcal": plan.day_total_kcal,
        "deviation": abs(plan.day_total_kcal - target),
        "projected_stars": score_stars(plan.day_total_kcal, target),
        "plan": {
            slot: [{"item_id": p.item_id, "quantity": p.quantity} for p in choice.picks]
            for slot, choice in (
                ("breakfast", plan.breakfast), ("lunch", plan.lunch), ("dinner", plan.dinner),
            )
        },
    }
    click.echo(json.dumps(payload, indent=2))


@main.command("study-report")
@click.option("--csv", "csv_path", default=None,
              help="study CSV (default: the shipped fixture)")
@click.option("--plot", "plot_dir", default=None, type=click.Path(file_okay=False),
              help="also write SVG charts to this directory")
def study_report(csv_path, plot_dir) -> None:
    """Render the pre/post study report."""
    records = analytics.load_study_csv(csv_path)
    click.echo(analytics.render_report(records))
    if plot_dir:
        written = analytics.write_plots(records, plot_dir)
        click.echo(f"wrote {len(written)} charts to {plot_dir}")


def run() -> None:
    try:
        main(standalone_mode=True)
    except FoodCalError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    run()
