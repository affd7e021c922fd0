"""Command-line entry point.

    ehfol <subcommand> key=value ... [-o OUTDIR]

Subcommands: foliate, energy, sobolev, evolve, report.  Parameters are
flat key=value tokens; ``evolve`` additionally accepts ``config=FILE``
pointing at a key=value file (# comments allowed), with command-line
tokens overriding file entries.  Every run writes its data products plus
a manifest recording the resolved parameters, output hashes and headline
numbers.

Exit status: 0 success, 2 validation error, 3 numerical failure
(blow-up or a fired inequality alarm).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .cutoffs import default_profile
from .energy import energy_on_slice, sample_field
from .evolution import (BlowUpError, EvolutionConfig, Region, decay_series,
                        evolve_radial, fit_decay, sample_on_slices)
from .foliation import _region_of, build_time_function, slice_points
from .sobolev import (constant_sweep, gaussian_family, slow_tail_family,
                      zero_family)
from .waves import free_wave_field

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class ValidationError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(c) for c in row) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# key=value parsing
# ---------------------------------------------------------------------------

def _floats(raw: str):
    try:
        vals = [float(tok) for tok in raw.split(",") if tok != ""]
    except ValueError:
        raise ValidationError(f"expected comma-separated floats, got {raw!r}")
    if not vals:
        raise ValidationError(f"empty float list {raw!r}")
    return vals


def _float(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"expected a float, got {raw!r}")


def _int(raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"expected an integer, got {raw!r}")


def _choice(*allowed):
    def parse(raw: str) -> str:
        if raw not in allowed:
            raise ValidationError(f"expected one of {allowed}, got {raw!r}")
        return raw
    return parse


def _str(raw: str) -> str:
    return raw


_REQUIRED = object()

SCHEMAS = {
    "foliate": {
        "s": (_floats, _REQUIRED),
        "r_max": (_float, 20.0),
        "tol": (_float, 1e-10),
        "n": (_int, 801),
        "seed": (_int, 0),
    },
    "energy": {
        "s": (_floats, [2.0, 3.0, 4.0]),
        "eta": (_float, 0.5),
        "c": (_float, 1.0),
        "field": (_choice("gaussian", "wave"), "gaussian"),
        "amp": (_float, 1.0),
        "width": (_float, 1.0),
        "center": (_float, 1.0),
        "n": (_int, 801),
        "r_max": (_float, 0.0),  # 0: automatic per slice
        "tol": (_float, 1e-10),
        "seed": (_int, 0),
    },
    "sobolev": {
        "family": (_choice("gaussian", "zero", "slowtail"), "gaussian"),
        "s": (_floats, [2.0, 3.0, 4.0]),
        "amp": (_float, 1.0),
        "refinements": (_int, 3),
        "self_test": (_int, 0),
        "seed": (_int, 0),
    },
    "evolve": {
        "config": (_str, ""),
        "r_max": (_float, 40.0),
        "n_r": (_int, 2000),
        "t_end": (_float, 10.0),
        "cfl": (_float, 0.5),
        "mass_u": (_float, 0.0),
        "mass_v": (_float, 1.0),
        "coupling_u": (_str, ""),
        "coupling_v": (_str, ""),
        "eps": (_float, 1.0),
        "profile_u": (_str, "gaussian"),
        "width_u": (_float, 1.0),
        "center_u": (_float, 0.0),
        "profile_v": (_str, "none"),
        "width_v": (_float, 1.0),
        "center_v": (_float, 0.0),
        "boundary": (_choice("sommerfeld", "reflect"), "sommerfeld"),
        "s": (_floats, [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]),
        "field": (_choice("u", "v"), "u"),
        "region": (_choice("interior", "transition", "exterior"),
                   "interior"),
        "measure": (_choice("abs", "envelope"), "abs"),
        "n_slice": (_int, 601),
        "eta": (_float, 0.5),
        "energies": (_int, 0),
        "snapshots": (_int, 0),
        "store_stride": (_int, 0),
        "seed": (_int, 0),
    },
    "report": {
        "dir": (_str, ""),
    },
}


def parse_params(subcommand: str, tokens: list[str]) -> dict:
    schema = SCHEMAS[subcommand]
    raw: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise ValidationError(f"expected key=value, got {tok!r}")
        key, _, val = tok.partition("=")
        if key not in schema:
            raise ValidationError(
                f"unknown key {key!r} for subcommand {subcommand!r}")
        raw[key] = val

    if subcommand == "evolve" and raw.get("config"):
        file_raw = _read_config_file(Path(raw["config"]), schema)
        file_raw.update(raw)
        raw = file_raw

    params = {}
    for key, (parse, default) in schema.items():
        if key in raw:
            params[key] = parse(raw[key])
        elif default is _REQUIRED:
            raise ValidationError(f"missing required key {key!r}")
        else:
            params[key] = default
    return params


def _read_config_file(path: Path, schema) -> dict:
    if not path.exists():
        raise ValidationError(f"config file {path} does not exist")
    raw = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(
                f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in schema:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        raw[key] = val
    return raw


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _manifest(outdir: Path, subcommand: str, params: dict, outputs,
              headline: dict, status: str = "ok", reason: str = "") -> Path:
    params_json = json.dumps(params, sort_keys=True, default=str)
    tag = hashlib.sha256(params_json.encode()).hexdigest()[:8]
    manifest = {
        "tool": "ehfol",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": json.loads(params_json),
        "outputs": [{"path": p.name, "sha256": _sha256(p),
                     "bytes": p.stat().st_size} for p in outputs],
        "headline": headline,
        "status": status,
        "reason": reason,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = outdir / f"manifest-{subcommand}-{tag}.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def run_foliate(params: dict, outdir: Path) -> int:
    rows = []
    max_defect = 0.0
    for s in sorted(params["s"]):
        if s < 1.0:
            raise ValidationError(f"foliate requires s >= 1, got {s}")
        table = build_time_function(s, params["r_max"], params["tol"],
                                    n_nodes=params["n"])
        for i, r in enumerate(table.r_nodes):
            region = _region_of(s, float(r))
            rows.append((s, r, table.T_values[i], table.drT_values[i],
                         table.dsT_values[i], region.value))
            if region.value == "interior":
                max_defect = max(max_defect,
                                 abs(table.T_values[i] ** 2
                                     - (s * s + r * r)))
    out = outdir / "foliate.csv"
    write_csv(out, ["s", "r", "T", "drT", "dsT", "region"], rows)
    _manifest(outdir, "foliate", params, [out],
              {"max_interior_defect": max_defect})
    return EXIT_OK


def _energy_field(params: dict):
    amp, width, center = params["amp"], params["width"], params["center"]
    if params["field"] == "gaussian":
        def v(t, r):
            return amp * np.exp(-((r / width) ** 2))

        def vt(t, r):
            return np.zeros_like(np.asarray(r, dtype=float))

        def vr(t, r):
            return amp * (-2.0 * r / width ** 2) * np.exp(-((r / width) ** 2))

        return v, vt, vr
    return free_wave_field(amp, width, center)


def run_energy(params: dict, outdir: Path) -> int:
    v, vt, vr = _energy_field(params)
    rows = []
    max_gap = 0.0
    for s in sorted(params["s"]):
        if s < 1.0:
            raise ValidationError(f"energy requires s >= 1, got {s}")
        R = params["r_max"] or (0.5 * s * s + 10.0)
        table = build_time_function(s, R, params["tol"])
        sample = slice_points(s, R, params["n"], "geometric", table=table)
        field = sample_field(v, vt, vr, sample)
        row = energy_on_slice(field, params["eta"], params["c"], table)
        rows.append((s, row["E_frame"], row["E_interior"],
                     row["E_transition"], row["E_exterior"],
                     params["eta"], params["c"], row["form_gap"]))
        max_gap = max(max_gap, row["form_gap"] / (1.0 + row["E_flat"]))
    out = outdir / "energy.csv"
    write_csv(out, ["s", "E_total", "E_int", "E_tran", "E_ext", "eta", "c",
                    "form_gap"], rows)
    _manifest(outdir, "energy", params, [out],
              {"max_relative_form_gap": max_gap})
    return EXIT_OK


def run_sobolev(params: dict, outdir: Path) -> int:
    family = {"gaussian": gaussian_family, "zero": zero_family,
              "slowtail": slow_tail_family}[params["family"]]()
    family.amplitude = params["amp"]
    for s in params["s"]:
        if s < 2.0:
            raise ValidationError(f"sobolev requires s >= 2, got {s}")
    estimates = constant_sweep(family, sorted(params["s"]),
                               refinements=params["refinements"],
                               seed=params["seed"],
                               self_test=bool(params["self_test"]))
    rows = []
    for est in estimates:
        for level, ratio in zip(est.levels, est.ratios):
            rows.append((est.inequality, est.s, est.family, est.param,
                         level, ratio, est.alarm))
    out = outdir / "sobolev.csv"
    write_csv(out, ["inequality", "s", "family", "param", "refinement",
                    "ratio", "alarm"], rows)
    n_alarms = sum(est.alarm for est in estimates)
    max_ratio = max((est.ratio for est in estimates), default=0.0)
    status = "failed" if n_alarms else "ok"
    reason = f"{n_alarms} inequality alarm(s) fired" if n_alarms else ""
    _manifest(outdir, "sobolev", params, [out],
              {"alarms": n_alarms, "max_ratio": max_ratio}, status, reason)
    return EXIT_NUMERICAL if n_alarms else EXIT_OK


def run_evolve(params: dict, outdir: Path) -> int:
    config = EvolutionConfig(
        r_max=params["r_max"], n_r=params["n_r"], t_end=params["t_end"],
        cfl=params["cfl"], mass_u=params["mass_u"], mass_v=params["mass_v"],
        coupling_u=params["coupling_u"], coupling_v=params["coupling_v"],
        epsilon=params["eps"], profile_u=params["profile_u"],
        width_u=params["width_u"], center_u=params["center_u"],
        profile_v=params["profile_v"], width_v=params["width_v"],
        center_v=params["center_v"], boundary=params["boundary"],
        store_stride=params["store_stride"])
    try:
        config.validate()
    except ValueError as exc:
        raise ValidationError(str(exc))

    outputs = []
    headline: dict = {"backend": kernels.BACKEND}
    try:
        grid = evolve_radial(config)
    except BlowUpError as exc:
        _manifest(outdir, "evolve", params, [], {"t_blowup": exc.t_last},
                  status="failed", reason=str(exc))
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    s_list = sorted(params["s"])
    which = params["field"]
    samples = sample_on_slices(grid, s_list, which=which,
                               n_slice=params["n_slice"])

    slice_rows = []
    for s in s_list:
        data = samples[s]
        for i in range(len(data.sample.r)):
            slice_rows.append((s, data.sample.r[i], data.sample.t[i],
                               data.field.v[i], data.field.vt[i],
                               data.field.vr[i]))
    slices_csv = outdir / "slices.csv"
    write_csv(slices_csv, ["s", "r", "t", "u", "ut", "ur"], slice_rows)
    outputs.append(slices_csv)

    region = Region(params["region"])
    decay_rows = decay_series(grid, s_list, region, which=which,
                              measure=params["measure"],
                              n_slice=params["n_slice"])
    fit = None
    if len(decay_rows) >= 6 and all(row["sup"] > 0 for row in decay_rows):
        fit = fit_decay([row["sup"] for row in decay_rows],
                        [row["t_char"] for row in decay_rows])
        headline["fit_exponent"] = fit.exponent
        headline["fit_stderr"] = fit.stderr
    csv_rows = [(row["s"], row["region"], row["sup"], row["t_char"],
                 row["r_sup"],
                 fit.exponent if fit else "", fit.stderr if fit else "")
                for row in decay_rows]
    decay_csv = outdir / "decay.csv"
    write_csv(decay_csv, ["s", "region", "sup", "t_char", "r_sup",
                          "fit_exponent", "fit_stderr"], csv_rows)
    outputs.append(decay_csv)

    if params["energies"]:
        energy_rows = []
        for field_name, mass in (("u", config.mass_u), ("v", config.mass_v)):
            fsamples = samples if field_name == which else sample_on_slices(
                grid, s_list, which=field_name, n_slice=params["n_slice"])
            for s in s_list:
                data = fsamples[s]
                row = energy_on_slice(data.field, params["eta"], mass,
                                      data.table)
                energy_rows.append((s, field_name, row["E_frame"],
                                    row["E_interior"], row["E_transition"],
                                    row["E_exterior"], params["eta"], mass,
                                    row["form_gap"]))
        energy_csv = outdir / "evolve_energy.csv"
        write_csv(energy_csv, ["s", "field", "E_total", "E_int", "E_tran",
                               "E_ext", "eta", "c", "form_gap"], energy_rows)
        outputs.append(energy_csv)

    if params["snapshots"]:
        stride = max(1, len(grid.t_stored) // 40)
        snap_rows = []
        for k in range(0, len(grid.t_stored), stride):
            for i in range(0, len(grid.r), max(1, len(grid.r) // 400)):
                snap_rows.append((grid.t_stored[k], grid.r[i],
                                  grid.u[k, i], grid.v[k, i]))
        snap_csv = outdir / "snapshots.csv"
        write_csv(snap_csv, ["t", "r", "u", "v"], snap_rows)
        outputs.append(snap_csv)

    _manifest(outdir, "evolve", params, outputs, headline)
    return EXIT_OK


def run_report(params: dict, outdir: Path) -> int:
    target = Path(params["dir"]) if params["dir"] else outdir
    if not target.exists():
        raise ValidationError(f"report directory {target} does not exist")
    runs = []
    problems = []
    for path in sorted(target.glob("manifest-*.json")):
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            problems.append({"manifest": path.name, "error": str(exc)})
            continue
        runs.append({
            "manifest": path.name,
            "manifest_sha256": _sha256(path),
            "subcommand": data.get("subcommand"),
            "status": data.get("status"),
            "reason": data.get("reason", ""),
            "headline": data.get("headline", {}),
        })
    summary = {
        "tool": "ehfol",
        "version": __version__,
        "runs": runs,
        "unreadable_manifests": problems,
        "generated": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    out = target / "summary.json"
    out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"report: {len(runs)} run(s), {len(problems)} unreadable "
          f"manifest(s) -> {out}")
    return EXIT_OK


_RUNNERS = {
    "foliate": run_foliate,
    "energy": run_energy,
    "sobolev": run_sobolev,
    "evolve": run_evolve,
    "report": run_report,
}


def run(subcommand: str, tokens: list[str], outdir: str = ".") -> int:
    """Parse, validate and execute one subcommand; returns the exit code."""
    try:
        if subcommand not in _RUNNERS:
            raise ValidationError(f"unknown subcommand {subcommand!r}")
        params = parse_params(subcommand, tokens)
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        # warm the shared cut-off profile so timings stay per-subcommand
        default_profile()
        return _RUNNERS[subcommand](params, out)
    except (ValidationError, ValueError) as exc:
        # precondition violations from the library surface as ValueError
        print(f"error: validation: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BlowUpError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ehfol",
        description="Euclidean-hyperboloidal foliation workbench")
    parser.add_argument("subcommand", choices=sorted(_RUNNERS))
    parser.add_argument("params", nargs="*", metavar="key=value")
    parser.add_argument("-o", "--out", default=".", help="output directory")
    args = parser.parse_args(argv)
    return run(args.subcommand, args.params, args.out)


if __name__ == "__main__":
    sys.exit(main())
