"""Command line: run, analyze, compare and table.

Exit codes: 0 success, 1 protocol rejected or tampering detected,
2 usage error, 3 unsupported request.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import click

from . import __version__
from .adversary import adversarial_cost, detection_rate, from_name, impersonation_acceptance
from .analysis import analyze_all, fit_protocol
from .errors import ArgumentError, ConfigurationError, QAuthError, UnsupportedError
from .ledger import REFERENCE_SIZE, Entry, classify, compare, model_cost, notation
from .protocols import execute, get_spec, resolve_params
from .report import Report
from .strategies import describe, is_impersonation

EXIT_OK, EXIT_REJECTED, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

ADVERSARIES = ("none", "intercept", "substitute", "impersonate")
FORMATS = ("text", "json")
DEFAULTS: dict[str, Any] = {
    "n": 4,
    "m": 4,
    "s": 4,
    "k": None,
    "trials": None,
    "seed": 0,
    "adversary": "none",
    "format": "text",
    "deterministic": False,
}
_INT_KEYS = {"n": 1, "m": 1, "s": 0, "k": 1, "trials": 1, "seed": 0}


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON config whose keys mirror the long flag names."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config must be a JSON object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in data.items():
        if key in _INT_KEYS:
            if value is None and key in ("k", "trials"):
                continue
            if not isinstance(value, int) or isinstance(value, bool) or value < _INT_KEYS[key]:
                raise ConfigurationError(f"config {key!r} must be an integer >= {_INT_KEYS[key]}")
        elif key == "adversary" and value not in ADVERSARIES:
            raise ConfigurationError(f"config 'adversary' must be one of {', '.join(ADVERSARIES)}")
        elif key == "format" and value not in FORMATS:
            raise ConfigurationError(f"config 'format' must be one of {', '.join(FORMATS)}")
        elif key == "deterministic" and not isinstance(value, bool):
            raise ConfigurationError("config 'deterministic' must be true or false")
    return data


def settings(given: dict[str, Any]) -> dict[str, Any]:
    """Flags override the config file, which overrides the defaults."""
    out = dict(DEFAULTS)
    config = given.pop("config", None)
    if config is not None:
        out.update(load_config(config))
    out.update({k: v for k, v in given.items() if v is not None and not (k == "deterministic" and v is False)})
    return out


def _opt(name: str, *dest: str, **kw):
    return click.option(f"--{name}", *dest, default=None, **kw)


SIZE = {
    "n": _opt("n", type=click.IntRange(min=1), help="Key or identity size."),
    "m": _opt("m", type=click.IntRange(min=1), help="Message length in bits."),
    "s": _opt("s", type=click.IntRange(min=0), help="Zeng-Guo check bits."),
    "k": _opt("k", type=click.IntRange(min=1), help="Zhang-Li-Guo session key length (defaults to n)."),
}
TRIALS = _opt("trials", type=click.IntRange(min=1), help="Monte Carlo trials (at least 100) for rate estimates.")
SEED = _opt("seed", type=click.IntRange(min=0), help="Master seed (default 0).")
ADVERSARY = _opt("adversary", type=click.Choice(ADVERSARIES), help="Eve's strategy (default none).")
OUTPUT = [
    _opt("format", "fmt", type=click.Choice(FORMATS), help="Output format (default text)."),
    click.option("--deterministic", is_flag=True, default=False, help="Omit the timestamp from reports."),
    click.option("--config", type=click.Path(dir_okay=False), default=None, help="JSON file with flag values."),
]


def _options(*options):
    def decorate(f):
        for option in reversed(options):
            f = option(f)
        return f

    return decorate


def _settings(kwargs: dict[str, Any]) -> dict[str, Any]:
    if "fmt" in kwargs:
        kwargs["format"] = kwargs.pop("fmt")
    try:
        return settings(kwargs)
    except ConfigurationError as exc:
        raise click.UsageError(str(exc)) from exc


def _params(opts: dict[str, Any]) -> dict[str, Any]:
    p = resolve_params({key: opts[key] for key in ("n", "m", "s", "k")})
    return {**p, "trials": opts["trials"], "seed": opts["seed"]}


def _emit(report: Report, opts: dict[str, Any], text: str) -> None:
    report.stamp(opts["deterministic"])
    if opts["format"] == "json":
        click.echo(report.to_json(), nl=False)
    else:
        click.echo(text)


class _Guard:
    """Translate library errors into the documented exit codes."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None or not isinstance(exc, QAuthError):
            return False
        if isinstance(exc, UnsupportedError):
            click.echo(f"unsupported: {exc}", err=True)
            sys.exit(EXIT_UNSUPPORTED)
        if isinstance(exc, (ArgumentError, ConfigurationError)):
            raise click.UsageError(str(exc)) from exc
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_REJECTED)


# -- text rendering ------------------------------------------------------------

def _kv(rows: list[tuple[str, Any]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "n/a"
    if isinstance(value, dict):
        return " ".join(f"{k}={_fmt(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def _rate_text(rate: dict) -> str:
    return f"{rate['point']!r} [{rate['lo']!r}, {rate['hi']!r}] hits={rate['hits']} trials={rate['trials']}"


def render_run(r: Report) -> str:
    rows = [
        ("protocol", r.protocol),
        ("params", _fmt(r.params)),
        ("adversary", r.adversary),
        ("tally", _fmt(r.tally)),
        ("model", r.model),
        ("expression", r.expression),
        ("cost", r.cost),
        ("outcome", _fmt(r.outcome)),
    ]
    for name, rate in (r.rates or {}).items():
        rows.append((name, _rate_text(rate)))
    if r.adversarial:
        a = r.adversarial
        rows += [
            ("restarts", _fmt(a["restarts"])),
            ("adversarial", a["notation"]),
            ("expected", _fmt(a["expected_communications"])),
        ]
    return _kv(rows)


def render_analysis(r: Report) -> str:
    a = r.analysis
    rows = [
        ("protocol", a["protocol"]),
        ("kind", a["kind"]),
        ("simulable", _fmt(a["simulable"])),
        ("declared", f"{a['declared_model']} {a['declared_rendered']} ({a['declared']['bound']})"),
        ("notation", a["notation"]),
    ]
    if a["simulable"]:
        rows += [
            ("fitted", f"{a['fitted_model']} {a['fitted_rendered']}"),
            ("grid", " ".join(f"({n},{m})->{c}" for n, m, c in a["grid"])),
            ("holdout", "({},{})->{}".format(*a["holdout"])),
            ("agreement", _fmt(a["agreement"])),
        ]
    rows.append(("source", a["citation"]))
    return _kv(rows)


def render_comparison(r: Report) -> str:
    c = r.comparison
    ref = ", ".join(f"{k}={v}" for k, v in c["reference"].items())
    lines = [f"ranked at {ref}"]
    for g in c["groups"]:
        lines.append("")
        lines.append(f"[{g['model']}]")
        for e in g["ranked"]:
            lines.append(f"  {e['rank']}. {e['protocol']:<18} {e['expression']:<10} = {e['value']}")
        for tie in g["ties"]:
            lines.append(f"  tied: {', '.join(tie)}")
        for x in g["crossovers"]:
            lines.append(f"  {x['cheaper']} is cheaper than {x['other']} when {x['condition']}")
        for a, b in g["not_comparable"]:
            lines.append(f"  not comparable: {a} (exact) vs {b} (lower bound)")
    if c["cross_group"]:
        lines.append("")
        for x in c["cross_group"]:
            lines.append(f"not comparable: {x['a']} ({x['models'][0]}) vs {x['b']} ({x['models'][1]}): different models")
    return "\n".join(lines)


def render_table(r: Report) -> str:
    head = ("protocol", "kind", "model", "complexity", "simulable", "verified")
    body = [
        (row["protocol"], row["kind"], row["model"], row["notation"], _fmt(row["simulable"]), _fmt(row["verified"]))
        for row in r.table
    ]
    widths = [max(len(x[i]) for x in (head, *body)) for i in range(len(head))]
    fmt = lambda cols: "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()
    return "\n".join([fmt(head), fmt(tuple("-" * w for w in widths)), *map(fmt, body)])


# -- commands ----------------------------------------------------------------

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="qauthcc")
def cli():
    """Communication complexity laboratory for quantum authentication protocols."""


@cli.command()
@click.argument("protocol_id")
@_options(*SIZE.values(), TRIALS, SEED, ADVERSARY, *OUTPUT)
def run(protocol_id: str, **kwargs):
    """Execute one seeded session of PROTOCOL_ID and report its resources."""
    opts = _settings(kwargs)
    with _Guard():
        spec = get_spec(protocol_id)
        if not spec.simulable:
            raise UnsupportedError(
                f"{protocol_id} is accounting-only; use `qauthcc analyze {protocol_id}` for its declared complexity"
            )
        params = _params(opts)
        adversary = from_name(opts["adversary"], protocol_id)
        sizes = {k: params[k] for k in ("n", "m", "s", "k")}
        ex = execute(protocol_id, sizes, params["seed"], adversary)
        t = ex.tally
        model = classify(t)
        report = Report(
            "run",
            protocol=protocol_id,
            params=params,
            adversary=describe(adversary),
            tally=t.as_dict(),
            model=model.value,
            expression=notation(model, spec.declared_complexity, spec.kind),
            cost=model_cost(t, model),
            outcome=ex.outcome.summary(),
        )
        if params["trials"] is not None:
            trials, seed = params["trials"], params["seed"]
            rates = {"detection": detection_rate(protocol_id, sizes, adversary, trials, seed).as_dict()}
            if is_impersonation(adversary):
                rates["impersonation_acceptance"] = impersonation_acceptance(protocol_id, sizes, trials, seed).as_dict()
            cost = adversarial_cost(protocol_id, sizes, adversary, trials, seed)
            if adversary is not None:
                rates["failure"] = cost.failure.as_dict()
            report.rates = rates
            report.adversarial = cost.as_dict()
    _emit(report, opts, render_run(report))
    sys.exit(EXIT_REJECTED if ex.outcome.failed or ex.outcome.eavesdrop_detected else EXIT_OK)


@cli.command()
@click.argument("protocol_id")
@_options(SIZE["s"], SEED, *OUTPUT)
def analyze(protocol_id: str, **kwargs):
    """Fit PROTOCOL_ID's honest cost over n, m in {2, 4, 8} and check it at 16.

    Accounting-only protocols report their declared model and bound.
    """
    opts = _settings(kwargs)
    with _Guard():
        a = fit_protocol(protocol_id, seed=opts["seed"], s=opts["s"])
        report = Report(
            "analyze",
            protocol=protocol_id,
            params=_params(opts),
            model=a.model.value,
            expression=a.notation(),
            analysis=a.as_dict(),
        )
    _emit(report, opts, render_analysis(report))


@cli.command(name="compare")
@click.argument("protocol_ids", nargs=-1)
@_options(*OUTPUT)
def compare_cmd(protocol_ids: tuple[str, ...], **kwargs):
    """Group protocols by model and rank them inside each group."""
    opts = _settings(kwargs)
    ids = list(dict.fromkeys(protocol_ids))
    if len(ids) < 2:
        raise click.UsageError("compare needs at least two distinct protocol ids")
    with _Guard():
        specs = [get_spec(pid) for pid in ids]
        result = compare([Entry(s.id, s.declared_model, s.declared_complexity) for s in specs], REFERENCE_SIZE)
    groups = [
        {
            "model": g.model.value,
            "ranked": [
                {"protocol": e.protocol_id, "expression": e.expr.render(), "value": str(e.value), "rank": e.rank}
                for e in g.ranked
            ],
            "ties": [list(t) for t in g.ties],
            "crossovers": [{"cheaper": x.cheaper, "other": x.other, "condition": x.condition} for x in g.crossovers],
            "not_comparable": [list(p) for p in g.not_comparable],
        }
        for g in result.groups
    ]
    model_of = {s.id: s.declared_model.value for s in specs}
    cross = [
        {"a": a, "b": b, "models": [model_of[a], model_of[b]], "relation": "not comparable"}
        for i, a in enumerate(ids)
        for b in ids[i + 1 :]
        if model_of[a] != model_of[b]
    ]
    report = Report("compare", comparison={"reference": dict(result.reference), "groups": groups, "cross_group": cross})
    _emit(report, opts, render_comparison(report))


@cli.command()
@_options(SEED, *OUTPUT)
def table(**kwargs):
    """All ten protocols with their model, complexity and self-check status."""
    opts = _settings(kwargs)
    with _Guard():
        rows = [
            {
                "protocol": a.spec.id,
                "kind": a.spec.kind.function,
                "model": a.spec.declared_model.value,
                "notation": a.notation(),
                "simulable": a.spec.simulable,
                "verified": a.agreement,
                "fitted": a.fit.expr.render() if a.fit else None,
            }
            for a in analyze_all(opts["seed"])
        ]
    report = Report("table", table=rows)
    _emit(report, opts, render_table(report))


def main(argv: list[str] | None = None) -> None:
    cli.main(args=argv, prog_name="qauthcc")


if __name__ == "__main__":
    main()
