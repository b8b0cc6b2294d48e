"""Command-line interface: named-structure documents in, verification
reports out.

Every command prints one report to stdout: a text section (one pass/fail
line per equation, then summary lines, then the verdict) followed by a
``---`` delimiter and a machine-readable JSON section.  Reports are
deterministic: identical invocations produce byte-identical output.  Exit
codes: 0 every listed equation passed, 1 verified failure, 2 inconclusive
or error.  With ``--figures DIR`` report commands also write a bar chart of
the relevant block dimensions.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .documents import Document, DocumentError, Resolver, parse_document
from .morita import (
    MoritaCertificate,
    SearchExhausted,
    build_tube_algebra,
    check_morita_witness,
    eilenberg_watts_roundtrip,
    indecomposable,
    verify_certificate,
)
from .reltensor import NotSeparable, bimodule_tensor, relative_tensor, \
    verify_monad
from .scalars import FieldSpec, NotSemisimple, NotSplitOverField, \
    decompose_semisimple_algebra
from .separability import Infeasible, is_rigid, is_separable
from .structures import (
    MalformedData,
    catalog_names,
    check_algebra,
    check_balanced,
    check_bimodule,
    check_module,
)

__all__ = ["main"]


# field / ambient argument grammars ------------------------------------------

def _parse_field_arg(text: str) -> FieldSpec:
    s = text.strip().lower()
    if s in ("q", "rational"):
        return FieldSpec("cyclotomic", 1)
    kind, _, arg = s.partition(":")
    try:
        if kind == "gf":
            return FieldSpec("prime", int(arg))
        if kind == "cyclotomic":
            return FieldSpec("cyclotomic", int(arg))
    except ValueError as exc:
        raise DocumentError(f"bad field spec {text!r}: {exc}") from exc
    raise DocumentError(f"bad field spec {text!r} "
                        "(use q, gf:P, or cyclotomic:N)")


def _z2xz2_table():
    return [[a ^ b for b in range(4)] for a in range(4)]


_AMBIENT_GROUPS = {
    "z2": [[0, 1], [1, 0]],
    "z3": [[(a + b) % 3 for b in range(3)] for a in range(3)],
    "z2xz2": _z2xz2_table(),
    "z2z2": _z2xz2_table(),
}


def _ambient_table(spec: str):
    s = spec.strip().lower()
    if s == "2vect":
        return None
    if s.startswith("2vectg:"):
        group = s.split(":", 1)[1]
        table = _AMBIENT_GROUPS.get(group)
        if table is None:
            raise DocumentError(f"unknown ambient group {group!r}")
        return table
    raise DocumentError(f"bad ambient spec {spec!r} "
                        "(use 2vect or 2vectg:GROUP)")


def _check_ambient(spec: str | None, alg, name: str) -> None:
    if spec is None:
        return
    table = _ambient_table(spec)
    want = 1 if table is None else len(table)
    have = alg.A.ambient.group_order
    if have != want:
        raise DocumentError(
            f"{name!r} lives over a grading group of order {have}, "
            f"but --ambient {spec} requires order {want}")


def _resolve_algebra(res: Resolver, name: str, spec: str | None):
    """Resolve an algebra; a graded --ambient regrades a pointed entry whose
    simples enumerate the group."""
    alg = res.algebra(name)
    if spec is None:
        return alg
    table = _ambient_table(spec)
    if table is None or alg.A.ambient.group_order == len(table):
        _check_ambient(spec, alg, name)
        return alg
    if alg.A.ambient.group_order != 1 or alg.A.rank != len(table):
        _check_ambient(spec, alg, name)
    entry = dict(res._entry(name))
    entry["group"] = {"table": table, "grades": list(range(len(table)))}
    from .structures import load_fusion_algebra
    return load_fusion_algebra(entry, alg.A.ambient.field, validate=False)


# report plumbing ------------------------------------------------------------

def _common(fn):
    fn = click.option("--figures", "figures_dir", default=None,
                      type=click.Path(file_okay=False),
                      help="directory for block-dimension bar charts")(fn)
    fn = click.option("--ambient", "ambient_spec", default=None,
                      help="expected ambient, e.g. 2vect or 2vectg:Z2")(fn)
    fn = click.option("--field", "field_spec", default=None,
                      help="ground field override: q, gf:P, or cyclotomic:N")(fn)
    fn = click.option("--doc", "doc_path", default=None,
                      help="document file ('-' for stdin) declaring entities")(fn)
    return fn


def _resolver(doc_path: str | None, field_spec: str | None) -> Resolver:
    doc = None
    if doc_path is not None:
        if doc_path == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(doc_path, encoding="utf-8") as handle:
                    text = handle.read()
            except OSError as exc:
                raise DocumentError(f"cannot read {doc_path!r}: {exc}") from exc
        doc = parse_document(text)
    field = _parse_field_arg(field_spec) if field_spec else None
    return Resolver(doc, field)


_EXIT = {"pass": 0, "fail": 1, "infeasible": 1, "inconclusive": 2}


def _write_figure(figures_dir: str, slug: str, title: str, labels, values):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    os.makedirs(figures_dir, exist_ok=True)
    path = os.path.join(figures_dir, f"{slug}.png")
    fig, ax = plt.subplots(figsize=(4.8, 3.2), dpi=100)
    ax.bar(range(len(values)), values, color="#4878cf")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels([str(x) for x in labels], rotation=45,
                       ha="right", fontsize=8)
    ax.set_ylabel("dimension")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": "twocat"})
    plt.close(fig)
    return path


def _finish(echo: str, equations: dict, summary: dict, verdict: str,
            figures_dir: str | None = None, figure=None) -> None:
    if figures_dir is not None and figure is not None:
        title, labels, values = figure
        slug = echo.split()[0] if " " not in echo else \
            "-".join(p for p in echo.split() if not p.startswith("-"))
        summary = dict(summary)
        summary["figure"] = _write_figure(figures_dir, slug, title,
                                          labels, values)
    lines = [f"# twocat {echo}"]
    for name, ok in equations.items():
        lines.append(f"{name}: {'pass' if ok else 'FAIL'}")
    for key, value in summary.items():
        if isinstance(value, (list, tuple)):
            value = " ".join(str(v) for v in value)
        lines.append(f"{key}: {value}")
    lines.append(f"verdict: {verdict}")
    lines.append("---")
    payload = {"command": echo, "equations": equations,
               "summary": {k: list(v) if isinstance(v, tuple) else v
                           for k, v in summary.items()},
               "verdict": verdict}
    lines.append(json.dumps(payload, indent=2, sort_keys=True))
    click.echo("\n".join(lines))
    sys.exit(_EXIT[verdict])


def _echo(base: str, ambient_spec=None, field_spec=None) -> str:
    parts = [base]
    if ambient_spec:
        parts.append(f"--ambient {ambient_spec}")
    if field_spec:
        parts.append(f"--field {field_spec}")
    return " ".join(parts)


def _eqs(report: dict) -> dict:
    return {name: bool(line["ok"]) for name, line in report.items()}


def _verdict(equations: dict) -> str:
    return "pass" if all(equations.values()) else "fail"


def _guard(fn):
    """Run a command body, converting library errors to exit code 2."""
    try:
        fn()
    except (DocumentError, MalformedData) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _field_name(field: FieldSpec) -> str:
    return f"{field.kind}:{field.conductor}"


def _simple_labels(alg):
    return list(alg.simple_names) if alg.simple_names \
        else list(range(alg.A.rank))


def _row_sums(dims):
    return [sum(row) for row in dims]


# command group ---------------------------------------------------------------

@click.group()
def main():
    """Verification toolkit for algebras, modules and bimodules in skeletal
    semisimple monoidal 2-categories."""


@main.group()
def catalog():
    """Catalog management."""


@catalog.command("list")
def catalog_list():
    """List the names in the active catalog."""
    def body():
        names = catalog_names()
        _finish("catalog list", {}, {"entries": names}, "pass")
    _guard(body)


@main.group()
def check():
    """Replay the defining equations of a named structure."""


@check.command("algebra")
@click.argument("name")
@_common
def check_algebra_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Check the algebra axioms of NAME."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg = _resolve_algebra(res, name, ambient_spec)
        equations = _eqs(check_algebra(alg))
        summary = {"rank": alg.A.rank,
                   "field": _field_name(alg.A.ambient.field)}
        figure = (f"fusion multiplicities of {name}", _simple_labels(alg),
                  _row_sums(alg.m.dims))
        _finish(_echo(f"check algebra {name}", ambient_spec, field_spec), equations, summary,
                _verdict(equations), figures_dir, figure)
    _guard(body)


@check.command("module")
@click.argument("name")
@click.option("--side", type=click.Choice(["right", "left"]),
              default="right", help="which action the module carries")
@_common
def check_module_cmd(name, side, doc_path, field_spec, ambient_spec,
                     figures_dir):
    """Check the module axioms of NAME."""
    def body():
        res = _resolver(doc_path, field_spec)
        mod = res.right_module(name) if side == "right" \
            else res.left_module(name)
        _check_ambient(ambient_spec, mod.algebra, name)
        equations = _eqs(check_module(mod))
        action = mod.n if side == "right" else mod.l
        summary = {"carrier_rank": mod.M.rank,
                   "algebra_rank": mod.algebra.A.rank}
        figure = (f"action multiplicities of {name}",
                  list(range(mod.M.rank)), _row_sums(action.dims))
        _finish(_echo(f"check module {name} --side {side}", ambient_spec, field_spec), equations, summary,
                _verdict(equations), figures_dir, figure)
    _guard(body)


@check.command("bimodule")
@click.argument("name")
@_common
def check_bimodule_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Check the bimodule axioms of NAME."""
    def body():
        res = _resolver(doc_path, field_spec)
        bim = res.bimodule(name)
        _check_ambient(ambient_spec, bim.left.algebra, name)
        equations = _eqs(check_bimodule(bim))
        summary = {"carrier_rank": bim.P.rank,
                   "left_algebra_rank": bim.left.algebra.A.rank,
                   "right_algebra_rank": bim.right.algebra.A.rank}
        figure = (f"left action multiplicities of {name}",
                  list(range(bim.P.rank)), _row_sums(bim.left.l.dims))
        _finish(_echo(f"check bimodule {name}", ambient_spec, field_spec), equations, summary,
                _verdict(equations), figures_dir, figure)
    _guard(body)


@check.command("balanced")
@click.argument("name")
@_common
def check_balanced_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Check the balancing equations of NAME."""
    def body():
        res = _resolver(doc_path, field_spec)
        bal = res.balanced(name)
        _check_ambient(ambient_spec, bal.right.algebra, name)
        equations = _eqs(check_balanced(bal))
        summary = {"target_rank": bal.C.rank}
        figure = (f"morphism multiplicities of {name}",
                  list(range(bal.C.rank)), _row_sums(bal.f.dims))
        _finish(_echo(f"check balanced {name}", ambient_spec, field_spec), equations, summary,
                _verdict(equations), figures_dir, figure)
    _guard(body)


@main.command("rigid")
@click.argument("name")
@_common
def rigid_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Compute and verify a rigidity witness for the multiplication of NAME."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg = _resolve_algebra(res, name, ambient_spec)
        witness = is_rigid(alg)
        if isinstance(witness, Infeasible):
            _finish(_echo(f"rigid {name}", ambient_spec, field_spec),
                    {}, {"reason": witness.reason},
                    "infeasible", figures_dir)
        equations = _eqs(witness.report)
        summary = {"rank": alg.A.rank,
                   "adjoint_total_dim": sum(_row_sums(witness.m_star.dims))}
        figure = (f"right adjoint multiplicities of {name}",
                  list(range(witness.m_star.tgt.rank)),
                  _row_sums(witness.m_star.dims))
        _finish(_echo(f"rigid {name}", ambient_spec, field_spec),
                equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


@main.command("separable")
@click.argument("name")
@_common
def separable_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Decide separability of NAME over its ground field."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg = _resolve_algebra(res, name, ambient_spec)
        witness = is_separable(alg)
        echo = _echo(f"separable {name}", ambient_spec, field_spec)
        if isinstance(witness, Infeasible):
            summary = {"reason": witness.reason}
            if witness.rank_defect is not None:
                summary["rank_defect"] = witness.rank_defect
            _finish(echo, {}, summary, "infeasible", figures_dir)
        equations = _eqs(witness.report)
        summary = {"rank": alg.A.rank, "section_unique": witness.unique,
                   "field": _field_name(alg.A.ambient.field)}
        figure = (f"fusion multiplicities of {name}", _simple_labels(alg),
                  _row_sums(alg.m.dims))
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


def _resolve_triple(res, over, m_name, n_name):
    alg = res.algebra(over)
    M = res.right_module(m_name)
    N = res.left_module(n_name)
    if M.algebra != alg:
        raise DocumentError(f"{m_name!r} is not a module over {over!r}")
    if N.algebra != alg:
        raise DocumentError(f"{n_name!r} is not a module over {over!r}")
    return alg, M, N


@main.command("tensor")
@click.option("--over", "over", required=True,
              help="the algebra the tensor is taken over")
@click.argument("right_module")
@click.argument("left_module")
@_common
def tensor_cmd(over, right_module, left_module, doc_path, field_spec,
               ambient_spec, figures_dir):
    """Compute the relative tensor product of two modules over --over."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg, M, N = _resolve_triple(res, over, right_module, left_module)
        _check_ambient(ambient_spec, alg, over)
        echo = _echo(f"tensor --over {over} {right_module} {left_module}",
                     ambient_spec, field_spec)
        try:
            rt = relative_tensor(alg, M, N)
        except NotSeparable as exc:
            cert = exc.certificate
            summary = {"reason": cert.reason}
            if cert.rank_defect is not None:
                summary["rank_defect"] = cert.rank_defect
            _finish(echo, {}, summary, "infeasible", figures_dir)
        equations = _eqs(check_balanced(rt.t))
        summary = {"rank": rt.T.rank,
                   "source_rank": rt.t.f.src.rank,
                   "splitting_dims": _row_sums(rt.t.f.dims)}
        figure = ("universal leg multiplicities", list(range(rt.T.rank)),
                  _row_sums(rt.t.f.dims))
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


@main.command("split-monad")
@click.option("--over", "over", required=True)
@click.argument("right_module")
@click.argument("left_module")
@_common
def split_monad_cmd(over, right_module, left_module, doc_path, field_spec,
                    ambient_spec, figures_dir):
    """Split the 2-condensation monad of a module pair over --over."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg, M, N = _resolve_triple(res, over, right_module, left_module)
        _check_ambient(ambient_spec, alg, over)
        echo = _echo(
            f"split-monad --over {over} {right_module} {left_module}",
            ambient_spec, field_spec)
        try:
            rt = relative_tensor(alg, M, N)
        except NotSeparable as exc:
            _finish(echo, {}, {"reason": exc.certificate.reason},
                    "infeasible", figures_dir)
        equations = _eqs(verify_monad(rt.monad))
        split = rt.splitting
        equations["splittingcounitinvertible"] = split.phi.is_invertible()
        equations["splittingabsorptioninvertible"] = \
            split.theta.is_invertible()
        summary = {"monad_carrier_rank": rt.monad.carrier.rank,
                   "splitting_rank": split.B.rank,
                   "section_dims": _row_sums(split.g.dims)}
        figure = ("splitting multiplicities", list(range(split.B.rank)),
                  _row_sums(split.f.dims))
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


@main.command("verify-monad")
@click.option("--over", "over", required=True)
@click.argument("right_module")
@click.argument("left_module")
@_common
def verify_monad_cmd(over, right_module, left_module, doc_path, field_spec,
                     ambient_spec, figures_dir):
    """Verify the five 2-condensation monad equations for a module pair."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg, M, N = _resolve_triple(res, over, right_module, left_module)
        _check_ambient(ambient_spec, alg, over)
        echo = _echo(
            f"verify-monad --over {over} {right_module} {left_module}",
            ambient_spec, field_spec)
        try:
            rt = relative_tensor(alg, M, N)
        except NotSeparable as exc:
            _finish(echo, {}, {"reason": exc.certificate.reason},
                    "infeasible", figures_dir)
        equations = _eqs(verify_monad(rt.monad))
        summary = {"monad_carrier_rank": rt.monad.carrier.rank}
        figure = ("monad endomorphism multiplicities",
                  list(range(rt.monad.carrier.rank)),
                  _row_sums(rt.monad.e.dims))
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


@main.command("bimodule-compose")
@click.argument("p_name", metavar="P")
@click.argument("q_name", metavar="Q")
@_common
def bimodule_compose_cmd(p_name, q_name, doc_path, field_spec, ambient_spec,
                         figures_dir):
    """Compose two bimodules over their shared middle algebra."""
    def body():
        res = _resolver(doc_path, field_spec)
        P = res.bimodule(p_name)
        Q = res.bimodule(q_name)
        _check_ambient(ambient_spec, P.left.algebra, p_name)
        if P.right.algebra != Q.left.algebra:
            raise DocumentError(
                f"{p_name!r} and {q_name!r} share no middle algebra")
        echo = _echo(f"bimodule-compose {p_name} {q_name}",
                     ambient_spec, field_spec)
        try:
            T = bimodule_tensor(P, Q)
        except NotSeparable as exc:
            _finish(echo, {}, {"reason": exc.certificate.reason},
                    "infeasible", figures_dir)
        equations = _eqs(check_bimodule(T))
        summary = {"carrier_rank": T.P.rank,
                   "left_algebra_rank": T.left.algebra.A.rank,
                   "right_algebra_rank": T.right.algebra.A.rank}
        figure = ("composite left action multiplicities",
                  list(range(T.P.rank)), _row_sums(T.left.l.dims))
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


@main.command("morita-test")
@click.argument("p_name", metavar="P")
@click.argument("q_name", metavar="Q")
@_common
def morita_test_cmd(p_name, q_name, doc_path, field_spec, ambient_spec,
                    figures_dir):
    """Test whether bimodules P and Q are mutually inverse."""
    def body():
        res = _resolver(doc_path, field_spec)
        P = res.bimodule(p_name)
        Q = res.bimodule(q_name)
        _check_ambient(ambient_spec, P.left.algebra, p_name)
        echo = _echo(f"morita-test {p_name} {q_name}",
                     ambient_spec, field_spec)
        try:
            result = check_morita_witness(P, Q)
        except SearchExhausted as exc:
            _finish(echo, {}, {"reason": str(exc)}, "inconclusive",
                    figures_dir)
        except NotSeparable as exc:
            _finish(echo, {}, {"reason": exc.certificate.reason},
                    "infeasible", figures_dir)
        summary = {"left_algebra_rank": P.left.algebra.A.rank,
                   "right_algebra_rank": P.right.algebra.A.rank}
        if isinstance(result, MoritaCertificate):
            equations = {"bimoduleP": True, "bimoduleQ": True,
                         "eq1": True, "eq2": True,
                         "certificateverifies": verify_certificate(result)}
            figure = ("carrier multiplicities", list(range(P.P.rank)),
                      _row_sums(P.left.l.dims))
            _finish(echo, equations, summary, _verdict(equations),
                    figures_dir, figure)
        equations = _eqs(result)
        _finish(echo, equations, summary, "fail", figures_dir)
    _guard(body)


@main.command("center")
@click.argument("name")
@_common
def center_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Compute the tube algebra of NAME and its Wedderburn block data."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg = _resolve_algebra(res, name, ambient_spec)
        echo = _echo(f"center {name}", ambient_spec, field_spec)
        tube = build_tube_algebra(alg)
        equations = {"tubeassociative": tube.algebra.is_associative(),
                     "tubeunital": tube.algebra.find_unit() is not None}
        try:
            dec = decompose_semisimple_algebra(tube.algebra)
        except NotSemisimple as exc:
            _finish(echo, equations, {"tube_dim": tube.algebra.dim,
                                      "reason": f"tube not semisimple: {exc}"},
                    "fail", figures_dir)
        except NotSplitOverField as exc:
            _finish(echo, equations, {"tube_dim": tube.algebra.dim,
                                      "reason": f"not split: {exc}"},
                    "inconclusive", figures_dir)
        dims = sorted(b.block_dim for b in dec.blocks)
        summary = {"tube_dim": tube.algebra.dim,
                   "center_rank": len(dims), "block_dims": dims}
        figure = (f"center block dimensions of {name}",
                  list(range(len(dims))), dims)
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


@main.command("indecomposable")
@click.argument("name")
@_common
def indecomposable_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Decide whether NAME is indecomposable as a bimodule over itself."""
    def body():
        res = _resolver(doc_path, field_spec)
        alg = _resolve_algebra(res, name, ambient_spec)
        ok, dim = indecomposable(alg)
        _finish(_echo(f"indecomposable {name}", ambient_spec, field_spec), {"endomorphismspacetrivial": ok},
                {"rank": alg.A.rank, "endomorphism_dim": dim},
                "pass" if ok else "fail", figures_dir)
    _guard(body)


@main.command("ew-roundtrip")
@click.argument("name")
@_common
def ew_roundtrip_cmd(name, doc_path, field_spec, ambient_spec, figures_dir):
    """Verify the regular-composition roundtrip on a bimodule."""
    def body():
        res = _resolver(doc_path, field_spec)
        bim = res.bimodule(name)
        _check_ambient(ambient_spec, bim.left.algebra, name)
        echo = _echo(f"ew-roundtrip {name}", ambient_spec, field_spec)
        try:
            report = eilenberg_watts_roundtrip(bim)
        except NotSeparable as exc:
            _finish(echo, {}, {"reason": exc.certificate.reason},
                    "infeasible", figures_dir)
        equations = _eqs(report)
        summary = {"carrier_rank": bim.P.rank}
        figure = (f"left action multiplicities of {name}",
                  list(range(bim.P.rank)), _row_sums(bim.left.l.dims))
        _finish(echo, equations, summary, _verdict(equations),
                figures_dir, figure)
    _guard(body)


if __name__ == "__main__":
    main()
