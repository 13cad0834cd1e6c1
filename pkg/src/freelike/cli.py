"""Command-line entry point.

JSON is the machine format (sorted keys, fixed layout, reproducible bytes);
``--format text`` renders the same report for humans.  Every randomized
subcommand takes a seed (default 0, never wall-clock).  ``--workers`` only
parallelizes; output is bit-identical for any value and is therefore not
echoed in reports.

Exit status: 0 on success, 1 when a verification the command performs
fails (a condition flag false, an almost identity refuted), 2 on usage
errors such as missing files or bad parameters.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from freelike import __version__, kernel_backend
from freelike import cayley, cert, finitegrp, percolation, smallcancel
from freelike.errors import CPrimeViolation
from freelike.oracle import GroupOracle
from freelike.words import Word, parse_word


def _emit(command: str, config: dict, result: dict, fmt: str, text_render=None) -> None:
    if fmt == "json":
        payload = {"command": command, "config": config, "result": result}
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        if text_render is not None:
            click.echo(text_render)
        else:
            for key, value in result.items():
                click.echo(f"{key}: {value}")


def _load_presentation(path: str) -> smallcancel.Presentation:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return smallcancel.parse_presentation(fh.read())
    except OSError as exc:
        raise click.UsageError(f"cannot read presentation {path}: {exc}")
    except ValueError as exc:
        raise click.UsageError(f"bad presentation file {path}: {exc}")


def _verified(p: smallcancel.Presentation) -> smallcancel.Presentation:
    try:
        return p.verify_c_prime(Fraction(1, 6))
    except CPrimeViolation as exc:
        click.echo(f"presentation fails C'(1/6): {exc}", err=True)
        sys.exit(1)


def _parse_gens(text: str) -> cert.GeneratingSet:
    words = [parse_word(part.strip(), rank=2) for part in text.split(",")]
    return cert.GeneratingSet(tuple(words), label=text.strip())


def _load_graph(path: str) -> percolation.PercGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return percolation.parse_adjacency(fh.read())
    except OSError as exc:
        raise click.UsageError(f"cannot read graph {path}: {exc}")
    except ValueError as exc:
        raise click.UsageError(f"bad graph file {path}: {exc}")


fmt_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "text"]), default="json"
)
seed_option = click.option("--seed", type=int, default=0, show_default=True)
workers_option = click.option("--workers", type=int, default=1, show_default=True)


@click.group()
@click.version_option(__version__, message=f"freelike {__version__} ({kernel_backend} kernels)")
def main():
    """Small-cancellation certificates, Cayley balls, and percolation."""


@main.command("family-gen")
@click.option("--j", "j_values", type=int, multiple=True, required=True)
@click.option("--coeff-max", type=int, default=100, show_default=True)
@click.option("--out", type=click.Path(writable=True))
def family_gen(j_values, coeff_max, out):
    """Write the ladder relator family a b^2j a b^4j ... as a presentation file."""
    coefficients = tuple(range(2, coeff_max + 1, 2))
    relators = smallcancel.ladder_relators(set(j_values), coefficients)
    p = smallcancel.Presentation(2, relators)
    text = smallcancel.format_presentation(p)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command("check-sc")
@click.option("--file", "path", required=True)
@click.option("--lambda", "lam", default="1/6", show_default=True)
@fmt_option
def check_sc(path, lam, fmt):
    """Verify C'(lambda) and the girth-family conditions of a presentation."""
    p = _load_presentation(path)
    try:
        lam_frac = Fraction(lam)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"bad lambda {lam!r}")
    report = smallcancel.check_girth_conditions(p)
    cprime = smallcancel.check_c_prime(p, lam_frac)
    result = report.to_dict()
    result["c_prime_at_lambda"] = cprime.to_dict()
    ok = report.all_ok and cprime.ok
    _emit(
        "check-sc",
        {"file": path, "lambda": str(lam_frac)},
        result,
        fmt,
        text_render="\n".join(f"{k}: {v}" for k, v in result.items()),
    )
    if not ok:
        sys.exit(1)


@main.command("wp")
@click.option("--file", "path", required=True)
@click.option("--word", "word_text", required=True)
@click.option("--trace", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
def wp(path, word_text, trace, fmt):
    """Word problem: is the word trivial in the presented group?"""
    p = _verified(_load_presentation(path))
    try:
        w = parse_word(word_text, rank=p.rank)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    steps: list | None = [] if trace else None
    trivial = smallcancel.dehn_trivial(w, p, trace=steps)
    result: dict = {"trivial": trivial, "word": word_text}
    if trace:
        result["trace"] = steps
    lines = ["trivial" if trivial else "nontrivial"]
    if trace:
        lines += [json.dumps(s, sort_keys=True) for s in steps or ()]
    _emit(
        "wp",
        {"file": path, "word": word_text, "trace": trace},
        result,
        fmt,
        text_render="\n".join(lines),
    )


@main.command("girth")
@click.option("--presentation", "path")
@click.option("--free", "use_free", is_flag=True, help="Use the free-group oracle.")
@click.option("--gens", required=True, help='Comma-separated words, e.g. "a, ba^6".')
@click.option("--max-len", type=int, required=True)
@click.option("--budget", type=int, default=cert.DEFAULT_SCAN_BUDGET, show_default=True)
@fmt_option
def girth(path, use_free, gens, max_len, budget, fmt):
    """Scan for the shortest relation among the generating words."""
    z = _parse_gens(gens)
    if use_free == bool(path):
        raise click.UsageError("give exactly one of --presentation or --free")
    oracle = (
        GroupOracle.free(2) if use_free else GroupOracle.small_cancellation(_verified(_load_presentation(path)))
    )
    certificate = cert.girth_scan(oracle, z, max_len, budget)
    _emit(
        "girth",
        {"presentation": path, "free": use_free, "gens": gens, "max_len": max_len},
        certificate.to_dict(),
        fmt,
    )


@main.command("freelike-report")
@click.option("--presentation", "path", help="Defaults to the j in {1,2,3} ladder family.")
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--n", type=int, required=True)
@click.option("--scan", "scan_len", type=int, required=True)
@click.option("--subgroup-scan", type=int, default=8, show_default=True)
@click.option("--ball", "ball_radius", type=int, required=True)
@fmt_option
def freelike_report(path, k, n, scan_len, subgroup_scan, ball_radius, fmt):
    """Girth certificate + free-subgroup certificate + Cheeger upper bound."""
    if path:
        p = _load_presentation(path)
    else:
        p = smallcancel.Presentation(2, smallcancel.ladder_relators({1, 2, 3}))
    p = _verified(p)
    try:
        z = cert.high_girth_generators(k, n)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    oracle = GroupOracle.small_cancellation(p)
    girth_cert = cert.girth_scan(oracle, z, scan_len)
    pair = (z.words[0] ** 4, z.words[1])
    sub_cert = cert.free_subgroup_scan(oracle, pair, subgroup_scan)
    ball = cayley.build_ball(oracle, z, ball_radius)
    cheeger = cayley.cheeger_upper_bound(ball, cayley.sub_ball_family(ball))
    evidence = cert.FreeLikeEvidence(
        k=k,
        n=n,
        girth_certificate=girth_cert,
        free_subgroup_certificate=sub_cert,
        free_subgroup_scan_bound=subgroup_scan,
        cheeger_upper_bound=cheeger.best_ratio,
        notes=f"cheeger bound over sub-balls of the radius-{ball_radius} ball",
    )
    _emit(
        "freelike-report",
        {
            "presentation": path,
            "k": k,
            "n": n,
            "scan": scan_len,
            "subgroup_scan": subgroup_scan,
            "ball": ball_radius,
        },
        evidence.to_dict(),
        fmt,
    )
    if girth_cert.shortest_relation or sub_cert.shortest_relation:
        sys.exit(1)


@main.command("almost-id")
@click.option("--k", type=int, required=True)
@click.option("--max-word-len", type=int, required=True)
@fmt_option
def almost_id(k, max_word_len, fmt):
    """Fold all nontrivial words of bounded length into one almost identity."""
    try:
        u = cert.almost_identity_for_girth_bound(k, max_word_len)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(
        "almost-id",
        {"k": k, "max_word_len": max_word_len},
        {"word": str(u), "length": len(u)},
        fmt,
        text_render=str(u),
    )


@main.command("witness")
@click.option("--n", type=int, required=True)
@click.option("--tuple", "tuple_text", required=True)
@fmt_option
def witness(n, tuple_text, fmt):
    """Mod-n exponent-sum witness: x_i^n relation or proof of non-generation."""
    words = [parse_word(part.strip(), rank=2) for part in tuple_text.split(",")]
    try:
        w = cert.girth_witness_mod_n(words, n)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit("witness", {"n": n, "tuple": tuple_text}, w.to_dict(), fmt)


@main.command("ball")
@click.option("--presentation", "path")
@click.option("--free", "use_free", is_flag=True)
@click.option("--gens", required=True)
@click.option("--radius", type=int, required=True)
@click.option("--budget", type=int, default=cayley.DEFAULT_VERTEX_BUDGET, show_default=True)
@click.option("--export", "export_fmt", type=click.Choice(["adjacency", "dot"]), default="adjacency")
def ball_cmd(path, use_free, gens, radius, budget, export_fmt):
    """Build a Cayley ball and print it (adjacency text or dot)."""
    z = _parse_gens(gens)
    if use_free == bool(path):
        raise click.UsageError("give exactly one of --presentation or --free")
    oracle = (
        GroupOracle.free(2) if use_free else GroupOracle.small_cancellation(_verified(_load_presentation(path)))
    )
    b = cayley.build_ball(oracle, z, radius, budget)
    click.echo(cayley.export_graph(b, export_fmt), nl=False)


@main.command("cheeger")
@click.option("--presentation", "path")
@click.option("--free", "use_free", is_flag=True)
@click.option("--gens", required=True)
@click.option("--radius", type=int, required=True)
@click.option(
    "--family", default="sub-balls", show_default=True,
    help='"sub-balls" or "random:COUNT,SIZE".',
)
@seed_option
@fmt_option
def cheeger_cmd(path, use_free, gens, radius, family, seed, fmt):
    """Cheeger-constant upper bound over a candidate vertex-set family."""
    z = _parse_gens(gens)
    if use_free == bool(path):
        raise click.UsageError("give exactly one of --presentation or --free")
    oracle = (
        GroupOracle.free(2) if use_free else GroupOracle.small_cancellation(_verified(_load_presentation(path)))
    )
    b = cayley.build_ball(oracle, z, radius)
    if family == "sub-balls":
        candidates = cayley.sub_ball_family(b)
    elif family.startswith("random:"):
        try:
            count, size = (int(x) for x in family.split(":", 1)[1].split(","))
        except ValueError:
            raise click.UsageError('random family spec is "random:COUNT,SIZE"')
        candidates = cayley.random_connected_family(b, count, size, seed)
    else:
        raise click.UsageError(f"unknown family {family!r}")
    report = cayley.cheeger_upper_bound(b, candidates)
    _emit(
        "cheeger",
        {"presentation": path, "free": use_free, "gens": gens, "radius": radius,
         "family": family, "seed": seed},
        report.to_dict(),
        fmt,
    )


@main.command("percolate")
@click.option("--graph", "path", required=True)
@click.option("--p", type=float, required=True)
@click.option("--trials", type=int, required=True)
@seed_option
@workers_option
@fmt_option
def percolate(path, p, trials, seed, workers, fmt):
    """Monte Carlo root-to-target crossing probability at one p."""
    g = _load_graph(path)
    try:
        point = percolation.crossing_probability(g, p, trials, seed, workers)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(
        "percolate",
        {"graph": path, "p": p, "trials": trials, "seed": seed},
        point.to_dict(),
        fmt,
    )


@main.command("pc-estimate")
@click.option("--graph", "path", required=True)
@click.option("--trials", type=int, required=True, help="Trials per bisection probe.")
@click.option("--target", type=float, default=0.5, show_default=True)
@seed_option
@workers_option
@fmt_option
def pc_estimate(path, trials, target, seed, workers, fmt):
    """Bisection estimate of the crossing threshold."""
    g = _load_graph(path)
    try:
        est = percolation.threshold_estimate(g, trials, target, seed, workers)
    except (ValueError, percolation.NonBracketingError) as exc:
        raise click.UsageError(str(exc))
    _emit(
        "pc-estimate",
        {"graph": path, "trials": trials, "target": target, "seed": seed},
        est.to_dict(),
        fmt,
    )


@main.command("pc-compare")
@click.option("--presentation", "path", required=True)
@click.option("--gens", required=True)
@click.option("--radius", type=int, required=True)
@click.option("--trials", type=int, default=2000, show_default=True)
@seed_option
@workers_option
@fmt_option
def pc_compare(path, gens, radius, trials, seed, workers, fmt):
    """Threshold on the quotient ball vs the matching free-group ball."""
    p = _verified(_load_presentation(path))
    z = _parse_gens(gens)
    try:
        report = percolation.compare_quotient_vs_tree(
            p, z, radius, trials, seed, workers
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(
        "pc-compare",
        {"presentation": path, "gens": gens, "radius": radius, "trials": trials,
         "seed": seed},
        report.to_dict(),
        fmt,
    )


@main.command("finite-verify")
@click.option("--group", "group_name")
@click.option("--group-file", "group_path")
@click.option("--word", "word_text", required=True)
@click.option("--k", type=int, required=True)
@click.option("--budget", type=int, default=finitegrp.DEFAULT_TUPLE_BUDGET, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
def finite_verify(group_name, group_path, word_text, k, budget, fmt):
    """Check a word as a k-almost identity (and as an identity) of a finite group."""
    if bool(group_name) == bool(group_path):
        raise click.UsageError("give exactly one of --group or --group-file")
    try:
        if group_name:
            g = finitegrp.builtin(group_name)
        else:
            with open(group_path, "r", encoding="utf-8") as fh:
                g = finitegrp.parse_group(fh.read())
    except OSError as exc:
        raise click.UsageError(str(exc))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        u = parse_word(word_text, rank=k)
        almost = finitegrp.verify_almost_identity(g, u, k, budget)
        ident = finitegrp.is_identity(g, u, k, budget)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    result = {
        "almost_identity": almost.to_dict(),
        "identity": ident.to_dict(),
    }

    def render(check):
        if check.holds:
            return "yes"
        return "no (counterexample: " + ",".join(check.counterexample_names) + ")"

    _emit(
        "finite-verify",
        {"group": group_name or group_path, "word": word_text, "k": k},
        result,
        fmt,
        text_render=(
            f"almost-identity: {render(almost)}, identity: {render(ident)}"
        ),
    )
    if not almost.holds:
        sys.exit(1)


if __name__ == "__main__":
    main()
