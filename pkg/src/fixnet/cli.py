"""
Command line interface for fixnet.

Exit codes: 0 yes/pass, 1 no/fail, 2 input or usage error, 3 skipped
because a size cap was hit.
"""

import asyncio
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import click
from pydantic import ValidationError

from .analysis import cycle_sign_bound, phi_extremes, problem_verdicts
from .certificate import Certificate, certificate_check, certificate_search, certificate_to_bn, harvest_certificate
from .circuits import parse_circuit
from .cnf import CnfFormula, parse_dimacs
from .config import Caps, RunConfig, set_caps
from .digraph import SignedDigraph, validate_sid
from .errors import ArgumentError, FixnetError, FormatError, SizeCapError
from .formats import format_bn, format_layout, format_sid, parse_bn, parse_sid, read_text
from .gadgets import Gadget, Variant, add_free_loops, build_d_psi, degree_reduce, pad_max, pad_min, padding_roles, strongly_connect
from .instances import INSTANCE_NAMES, Instance, get_instance
from .nice import decide_max_ge1
from .succinct import SuccinctRepresentation, build_d_Psi
from .suite import CheckStatus, SuiteEngine, bundled_suite
from .verify import IDENTITIES, VerifyStatus, verify_identity

logger = logging.getLogger(__name__)

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_SKIPPED = 0, 1, 2, 3

REDUCTIONS = ("sat", "sat-min", "emajsat", "qsat2", "succinct", "succinct-min")


def _config(ctx: click.Context) -> RunConfig:
    return ctx.ensure_object(dict)["config"]


def _emit(ctx: click.Context, payload: Dict[str, Any], text: str) -> None:
    if _config(ctx).json_output:
        click.echo(json.dumps(payload, sort_keys=True, default=str))
    else:
        click.echo(text)


def guarded(command: Callable[..., int]) -> Callable[..., None]:
    """Map library errors onto exit codes; the command returns its own exit code."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        ctx = click.get_current_context()
        try:
            code = command(*args, **kwargs)
        except SizeCapError as e:
            _emit(ctx, {"status": "skipped", "reason": str(e)}, f"skipped: {e}")
            code = EXIT_SKIPPED
        except FixnetError as e:
            click.echo(f"error: {e}", err=True)
            code = EXIT_INPUT
        ctx.exit(code)

    return wrapper


def _parse_caps(values: Tuple[str, ...]) -> Caps:
    try:
        caps = Caps.from_env()
    except ArgumentError as e:
        raise click.UsageError(str(e)) from e
    changes: Dict[str, int] = {}
    for item in values:
        name, sep, raw = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected NAME=VALUE, got {item!r}", param_hint="--cap")
        if name not in Caps.model_fields:
            raise click.BadParameter(f"unknown cap {name!r}", param_hint="--cap")
        try:
            changes[name] = int(raw)
        except ValueError as e:
            raise click.BadParameter(f"{name} needs an integer, got {raw!r}", param_hint="--cap") from e
    try:
        return caps.override(**changes) if changes else caps
    except (ArgumentError, ValidationError) as e:
        raise click.BadParameter(str(e), param_hint="--cap") from e


@click.group()
@click.version_option(package_name="fixnet")
@click.option("--verbose", "-v", is_flag=True, help="Log debug detail to stderr")
@click.option("--json", "json_output", is_flag=True, help="Print JSON reports on stdout")
@click.option("--cap", "caps", multiple=True, metavar="NAME=VALUE", help="Override a size cap")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, json_output: bool, caps: Tuple[str, ...]) -> None:
    """fixnet - fixed points of Boolean networks over signed interaction digraphs"""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr)
    config = RunConfig(
        subcommand=ctx.invoked_subcommand or "",
        caps=_parse_caps(caps),
        json_output=json_output,
    )
    set_caps(config.caps)
    ctx.ensure_object(dict)["config"] = config


def _load_sid(path: Optional[str], example: Optional[str]) -> Tuple[SignedDigraph, str]:
    if example:
        instance = get_instance(example)
        if instance.digraph is None:
            raise ArgumentError(f"example {example} has no digraph")
        return instance.digraph, example
    if not path:
        raise click.UsageError("give a SID file or --example NAME")
    return parse_sid(read_text(path)), path


example_option = click.option(
    "--example", type=click.Choice(INSTANCE_NAMES), help="Use a bundled instance instead of a file"
)


@cli.command()
@click.argument("path", required=False)
@example_option
@click.pass_context
@guarded
def validate(ctx: click.Context, path: Optional[str], example: Optional[str]) -> int:
    """Check that a signed digraph is the SID of some network"""
    digraph, source = _load_sid(path, example)
    report = validate_sid(digraph)
    _config(ctx).inputs.append(source)
    text = [f"{source}: {'valid' if report.valid else 'invalid'}, {'nice' if report.nice else 'not nice'}"]
    for v in report.violators:
        text.append(f"  vertex {digraph.name(v)} has exactly one zero-signed in-neighbor among fewer than three")
    _emit(ctx, {"source": source, **report.model_dump()}, "\n".join(text))
    return EXIT_YES if report.valid else EXIT_NO


@cli.command()
@click.argument("path", required=False)
@example_option
@click.option("--max-k", type=int, help="Threshold K for all four questions; exit code follows phi_max >= K")
@click.option("--min-k", type=int, help="Threshold K for all four questions; exit code follows phi_min < K")
@click.option("--exact", is_flag=True, help="Report exact phi_max and phi_min")
@click.option("--decide-max1", is_flag=True, help="Only decide phi_max(D) >= 1, in polynomial time")
@click.option("--fvs", help="Comma-separated feedback vertex set for counting")
@click.pass_context
@guarded
def analyze(
    ctx: click.Context,
    path: Optional[str],
    example: Optional[str],
    max_k: Optional[int],
    min_k: Optional[int],
    exact: bool,
    decide_max1: bool,
    fvs: Optional[str],
) -> int:
    """Extreme fixed-point counts over all networks with a given SID"""
    digraph, source = _load_sid(path, example)
    caps = _config(ctx).caps
    for name, k in (("--max-k", max_k), ("--min-k", min_k)):
        if k is not None and k < 1:
            raise click.BadParameter("must be at least 1", param_hint=name)

    if decide_max1 or (max_k == 1 and min_k is None and not exact):
        decision = decide_max_ge1(digraph, caps, synthesize=True)
        payload: Dict[str, Any] = {"source": source, "max_ge_1": decision.answer}
        text = f"phi_max >= 1: {'yes' if decision.answer else 'no'}"
        if decision.fixed_point is not None and decision.witness is not None:
            payload["fixed_point"] = str(decision.fixed_point)
            payload["witness"] = format_bn(decision.witness)
            text += f"\nfixed point {decision.fixed_point} of\n{payload['witness']}"
        _emit(ctx, payload, text.rstrip())
        return EXIT_YES if decision.answer else EXIT_NO

    try:
        feedback = [int(v) for v in fvs.split(",")] if fvs else None
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated vertex ids, got {fvs!r}", param_hint="--fvs") from e
    report = phi_extremes(digraph, caps, fvs=feedback)
    bound = cycle_sign_bound(digraph, caps)
    payload = {"source": source, **report.to_json_dict(), "cycle_bound": bound.model_dump()}
    lines = [
        f"phi_max = {report.phi_max}",
        f"phi_min = {report.phi_min}",
        f"networks = {report.family_size}, max in-degree = {report.delta}, tau+ = {report.tau_plus}",
    ]
    code = EXIT_YES
    for flag, k, key in (("max", max_k, "max_ge_k"), ("min", min_k, "min_lt_k")):
        if k is None:
            continue
        verdicts = problem_verdicts(report, k)
        payload[f"{flag}_k"] = {"k": k, **verdicts}
        for relation, answer in (
            (f"phi_max >= {k}", verdicts["max_ge_k"]),
            (f"phi_max < {k}", verdicts["max_lt_k"]),
            (f"phi_min < {k}", verdicts["min_lt_k"]),
            (f"phi_min >= {k}", verdicts["min_ge_k"]),
        ):
            line = f"{relation}: {'yes' if answer else 'no'}"
            if line not in lines:
                lines.append(line)
        if not verdicts[key]:
            code = EXIT_NO
    _emit(ctx, payload, "\n".join(lines))
    return code


def _formula_gadget(kind: str, formula: CnfFormula, s: Optional[int]) -> Gadget:
    if kind in ("sat", "sat-min"):
        return build_d_psi(formula, Variant.MIN if kind == "sat-min" else Variant.MAX)
    if s is None:
        raise click.UsageError(f"{kind} needs --s")
    return add_free_loops(formula, s, Variant.MIN if kind == "qsat2" else Variant.MAX)


@cli.command("reduce")
@click.argument("kind", type=click.Choice(REDUCTIONS))
@click.argument("path", required=False)
@example_option
@click.option("--s", "s", type=int, help="Number of existential variables")
@click.option("--degree2", is_flag=True, help="Reduce the in-degree to at most 2 (formula gadgets only)")
@click.option("--strong", is_flag=True, help="Make the result strongly connected (needs --degree2)")
@click.option("--pad", type=int, help="Pad for threshold K")
@click.option("--output", "-o", type=click.Path(), help="Write the SID here and the layout next to it")
@click.pass_context
@guarded
def reduce_gadget(
    ctx: click.Context,
    kind: str,
    path: Optional[str],
    example: Optional[str],
    s: Optional[int],
    degree2: bool,
    strong: bool,
    pad: Optional[int],
    output: Optional[str],
) -> int:
    """Compile a formula or succinct circuit into a gadget SID"""
    if strong and not degree2:
        raise click.UsageError("--strong needs --degree2")
    if degree2 and kind.startswith("succinct"):
        raise click.UsageError("--degree2 applies to formula gadgets; D_Psi has source vertices it cannot reduce")
    instance: Optional[Instance] = get_instance(example) if example else None
    variant = Variant.MIN if kind.endswith("-min") or kind == "qsat2" else Variant.MAX
    if kind.startswith("succinct"):
        if instance is not None and instance.succinct is not None:
            rep = instance.succinct
        elif path:
            circuit, roles = parse_circuit(read_text(path))
            rep = SuccinctRepresentation.from_roles(circuit, roles)
        else:
            raise click.UsageError("give a circuit file or a succinct --example")
        gadget = build_d_Psi(rep, variant)
    else:
        if instance is not None and instance.formula is not None:
            formula = instance.formula
            s = s if s is not None else instance.s
        elif path:
            formula = parse_dimacs(read_text(path))
        else:
            raise click.UsageError("give a DIMACS file or a formula --example")
        gadget = _formula_gadget(kind, formula, s)

    digraph, layout = gadget
    roles = dict(layout.roles)
    if degree2:
        reduced = degree_reduce(digraph)
        digraph = reduced.digraph
        roles.update(reduced.chains)
    if strong:
        digraph, connected = strongly_connect(digraph, layout)
        roles.update({"u": connected["u"], "v": connected["v"]})
    if pad is not None:
        digraph = pad_min(digraph, pad) if variant is Variant.MIN else pad_max(digraph, pad)
        roles.update(padding_roles(digraph))

    sid_text, layout_text = format_sid(digraph), format_layout(roles)
    if output:
        target = Path(output)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(sid_text, encoding="utf-8")
        Path(f"{output}.layout").write_text(layout_text, encoding="utf-8")
    payload = {"kind": kind, "vertices": digraph.n, "arcs": len(digraph.arcs), "max_in_degree": digraph.max_in_degree}
    if output:
        _emit(ctx, {**payload, "output": output}, f"wrote {digraph.n} vertices to {output} (+ .layout)")
    else:
        commented = "".join(f"# {line}\n" for line in layout_text.splitlines())
        _emit(ctx, {**payload, "sid": sid_text, "layout": roles}, (sid_text + commented).rstrip())
    return EXIT_YES


def _file_instance(
    formula: Optional[str], circuit: Optional[str], sid: Optional[str], s: Optional[int], k: Optional[int]
) -> Instance:
    if formula:
        return Instance(formula, "DIMACS input", formula=parse_dimacs(read_text(formula)), s=s, k=k)
    if circuit:
        parsed, roles = parse_circuit(read_text(circuit))
        return Instance(circuit, "circuit input", succinct=SuccinctRepresentation.from_roles(parsed, roles))
    if sid:
        return Instance(sid, "SID input", digraph=parse_sid(read_text(sid)), k=k)
    raise click.UsageError("give an instance name or one of --formula, --circuit, --sid")


@cli.command()
@click.argument("identity", type=click.Choice(sorted(IDENTITIES) + ["suite"]))
@click.argument("instance", required=False, type=click.Choice(INSTANCE_NAMES))
@click.option("--formula", type=click.Path(exists=True), help="DIMACS file")
@click.option("--circuit", type=click.Path(exists=True), help="Circuit file with role lines")
@click.option("--sid", type=click.Path(exists=True), help="SID file")
@click.option("--s", "s", type=int, help="Existential prefix length")
@click.option("--k", "k", type=int, help="Threshold for the padding identities")
@click.option("--parallel", default=4, show_default=True, help="Concurrent checks for 'suite'")
@click.pass_context
@guarded
def verify(
    ctx: click.Context,
    identity: str,
    instance: Optional[str],
    formula: Optional[str],
    circuit: Optional[str],
    sid: Optional[str],
    s: Optional[int],
    k: Optional[int],
    parallel: int,
) -> int:
    """Check a reduction identity against the brute-force oracles, or run the bundled suite"""
    caps = _config(ctx).caps
    if identity == "suite":
        execution = asyncio.run(SuiteEngine(caps).run_suite(bundled_suite(parallel)))
        lines = [
            f"{e.check_id}: {e.status.value}" + (f" ({e.error})" if e.error else "")
            for e in execution.check_executions.values()
        ]
        counts = execution.counts()
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped")
        _emit(ctx, execution.model_dump(mode="json"), "\n".join(lines))
        if counts["fail"]:
            return EXIT_NO
        if any(e.status is CheckStatus.SKIPPED for e in execution.check_executions.values()):
            return EXIT_SKIPPED
        return EXIT_YES

    target = get_instance(instance) if instance else _file_instance(formula, circuit, sid, s, k)
    report = verify_identity(identity, target, caps)
    text = [f"{report.identity} on {report.instance}: {report.status.value}", f"  {report.relation}"]
    text.append(f"  lhs = {report.lhs}, rhs = {report.rhs}, evaluations = {report.evaluations}")
    text.extend(f"  note: {note}" for note in report.notes)
    text.extend(f"  measured: {m}" for m in report.measurements)
    _emit(ctx, report.model_dump(mode="json"), "\n".join(text))
    return {VerifyStatus.PASS: EXIT_YES, VerifyStatus.FAIL: EXIT_NO, VerifyStatus.SKIPPED: EXIT_SKIPPED}[report.status]


@cli.group()
def cert() -> None:
    """Fixed-point certificates: check, search, convert, harvest"""
    pass


def _load_certificate(path: str) -> Certificate:
    try:
        return Certificate.model_validate_json(read_text(path))
    except ValidationError as e:
        raise FormatError(f"{path} is not a certificate: {e.errors()[0]['msg']}") from e


@cert.command("check")
@click.argument("sid_path")
@click.argument("k", type=int)
@click.argument("cert_path")
@click.pass_context
@guarded
def cert_check(ctx: click.Context, sid_path: str, k: int, cert_path: str) -> int:
    """Accept or reject a certificate for 'phi_max(D) >= K'"""
    digraph = parse_sid(read_text(sid_path))
    accepted = certificate_check(digraph, k, _load_certificate(cert_path))
    _emit(ctx, {"accepted": accepted}, "accept" if accepted else "reject")
    return EXIT_YES if accepted else EXIT_NO


@cert.command("search")
@click.argument("sid_path")
@click.argument("k", type=int)
@click.pass_context
@guarded
def cert_search(ctx: click.Context, sid_path: str, k: int) -> int:
    """Search for a certificate; none exists iff phi_max(D) < K"""
    digraph = parse_sid(read_text(sid_path))
    found = certificate_search(digraph, k, _config(ctx).caps)
    if found is None:
        _emit(ctx, {"certificate": None}, "none")
        return EXIT_NO
    _emit(ctx, {"certificate": found.model_dump()}, found.model_dump_json(indent=2))
    return EXIT_YES


@cert.command("to-bn")
@click.argument("sid_path")
@click.argument("cert_path")
@click.pass_context
@guarded
def cert_to_bn(ctx: click.Context, sid_path: str, cert_path: str) -> int:
    """Build the network an accepted certificate describes"""
    digraph = parse_sid(read_text(sid_path))
    network = certificate_to_bn(digraph, _load_certificate(cert_path))
    text = format_bn(network)
    _emit(ctx, {"bn": text}, text.rstrip())
    return EXIT_YES


@cert.command("harvest")
@click.argument("sid_path")
@click.argument("bn_path")
@click.argument("k", type=int)
@click.pass_context
@guarded
def cert_harvest(ctx: click.Context, sid_path: str, bn_path: str, k: int) -> int:
    """Read a certificate off a network with at least K fixed points"""
    digraph = parse_sid(read_text(sid_path))
    found = harvest_certificate(digraph, parse_bn(read_text(bn_path)), k)
    _emit(ctx, {"certificate": found.model_dump()}, found.model_dump_json(indent=2))
    return EXIT_YES


if __name__ == "__main__":
    cli()
