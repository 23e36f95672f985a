"""Command-line front end.

Exit codes: 0 accepted / success, 1 rejected as unsound, 2 malformed
input or misuse, 3 capacity exceeded.  Reports are ``key: value`` lines in
a fixed order, so identical command lines give identical output.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import apps, oracles, qbf as qbf_mod, sums
from .circuit import arithmetize, parse_circuit, parse_formula, parse_qbf
from .errors import MAError, ProtocolError, UsageError
from .field import is_prime
from .graphs import parse_edge_list, parse_matrix, parse_int_csv, parse_vectors
from .opcount import OpCounter, counting
from .protocol import MALFORMED, _decode, alpha_tree, choose_params, prove_eval, upit_deterministic, \
    upit_random, verify_eval
from .serialize import parse_proof, serialize_proof
from .transcript import Coins, ReplayCoins, Transcript

EXIT_OK, EXIT_REJECT, EXIT_MALFORMED, EXIT_CAPACITY = 0, 1, 2, 3
_FIELD = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


# -- io helpers -----------------------------------------------------------------

def write_atomic(path: str, data: bytes) -> None:
    """Write via a temporary file in the same directory and rename."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def field_base(spec: str | None, default: int) -> tuple[int, int | None]:
    """(q, l) from a "q^l" override; l is None when no override is given."""
    if spec is None:
        return default, None
    m = _FIELD.match(spec)
    if not m:
        raise UsageError(f"field spec must look like q^l, got {spec!r}")
    q, ell = int(m.group(1)), int(m.group(2))
    if not is_prime(q) or ell < 1:
        raise UsageError(f"field {spec}: q must be prime and l >= 1")
    return q, ell


def check_ell(requested: int | None, chosen: int) -> None:
    if requested is not None and requested != chosen:
        raise UsageError(f"the parameters need l = {chosen}; --field asked for l = {requested}")


class Report:
    def __init__(self):
        self.lines: list[tuple[str, str]] = []

    def add(self, key: str, value) -> None:
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        self.lines.append((key, str(value)))

    def render(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.lines)


def formula_arg(args):
    if args.formula is not None:
        return parse_formula(args.formula)
    if args.formula_file is not None:
        return parse_formula(read_text(args.formula_file).strip())
    raise UsageError("give --formula TEXT or --formula-file PATH")


def qbf_arg(args):
    if args.qbf is not None:
        return parse_qbf(args.qbf)
    if args.qbf_file is not None:
        return parse_qbf(read_text(args.qbf_file).strip())
    raise UsageError("give --qbf TEXT or --qbf-file PATH")


def need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


# -- transcripts -------------------------------------------------------------------

def one_round_transcript(name: str, params: dict, proof, coins: Coins, accepted: bool) -> Transcript:
    t = Transcript(name, params, coins.seed)
    t.send("prover", "poly", serialize_proof(proof))
    t.record_coins(coins)
    t.decision = accepted
    t.send("verifier", "decision", b"\x01" if accepted else b"\x00")
    return t


def load_transcript(path: str) -> Transcript:
    return Transcript.from_json(read_text(path))


def proof_from_transcript(t: Transcript):
    polys = t.messages("poly")
    if len(polys) != 1:
        raise UsageError("transcript must hold exactly one proof message")
    return parse_proof(polys[0])


def emit_transcript(args, t: Transcript | None) -> None:
    if args.transcript and t is not None:
        write_atomic(args.transcript, t.to_json().encode())


def outcome_code(accepted: bool, reason: str | None) -> int:
    if accepted:
        return EXIT_OK
    return EXIT_MALFORMED if reason == MALFORMED else EXIT_REJECT


def report_eval(rep: Report, out) -> int:
    rep.add("result", "accepted" if out.accepted else f"rejected ({out.reason})")
    if out.accepted:
        rep.add("values", out.values)
    else:
        rep.add("detail", out.detail)
    rep.add("coins", out.coins_used)
    return outcome_code(out.accepted, out.reason)


def report_sum(rep: Report, out) -> int:
    rep.add("result", "accepted" if out.accepted else f"rejected ({out.reason})")
    if out.accepted:
        rep.add("sum", out.total)
    else:
        rep.add("detail", out.detail)
        if out.round is not None:
            rep.add("round", out.round)
    rep.add("coins", out.coins_used)
    return outcome_code(out.accepted, out.reason)


# -- eval ---------------------------------------------------------------------------

def cmd_prove_eval(args, rep: Report) -> int:
    C = parse_circuit(read_text(need(args, "circuit")))
    points = parse_int_csv(read_text(need(args, "points")))
    q, ell = field_base(args.field, 101)
    params = choose_params(C, len(points), q, args.error_exp)
    check_ell(ell, params.ell)
    proof = prove_eval(C, points, params)
    write_atomic(need(args, "out"), serialize_proof(proof))
    rep.add("proof", args.out)
    rep.add("field", f"{params.q}^{params.ell}")
    rep.add("degree", params.d)
    rep.add("coefficients", len(proof.coeffs))
    return EXIT_OK


def cmd_verify_eval(args, rep: Report) -> int:
    C = parse_circuit(read_text(need(args, "circuit")))
    points = parse_int_csv(read_text(need(args, "points")))
    if args.replay:
        t = load_transcript(args.replay)
        proof, coins = proof_from_transcript(t), ReplayCoins.from_transcript(t)
    else:
        proof, coins = parse_proof(read_bytes(need(args, "proof"))), Coins(args.seed)
    out = verify_eval(C, points, proof, coins)
    code = report_eval(rep, out)
    if not args.replay:
        emit_transcript(args, one_round_transcript("eval", proof.params.as_dict(), proof, coins, out.accepted))
    return code


# -- sums and #SAT ---------------------------------------------------------------------

def sum_target(args, verb: str):
    """(circuit, modulus) for ``sum`` (a circuit file) or ``sat`` (a formula)."""
    if verb == "sat":
        F = formula_arg(args)
        return arithmetize(F), sums.sat_prime(F.n)
    C = parse_circuit(read_text(need(args, "circuit")))
    p = args.modulus if args.modulus is not None else sums.sat_prime(C.n_inputs)
    return C, p


def claimed_from_proof(proof) -> int:
    F = proof.field
    vals = _decode(F, proof.coeff_array(F), alpha_tree(F, proof.params.K))
    return int(sum(int(v) for v in vals[:, 0])) % proof.params.q


def cmd_prove_sum(args, rep: Report, verb: str) -> int:
    C, p = sum_target(args, verb)
    if args.rounds >= 2:
        claimed = sums._cube_sum_value(C, p)
        out = sums.multiround_sum(sums.SumClaim(C, p, claimed), args.rounds, args.error_exp, Coins(args.seed))
        write_atomic(need(args, "out"), out.transcript.to_json().encode())
        rep.add("transcript", args.out)
        rep.add("modulus", p)
        rep.add("claim", claimed)
        return report_sum(rep, out)
    proof = sums.prove_sum(C, p, args.error_exp)
    write_atomic(need(args, "out"), serialize_proof(proof))
    rep.add("proof", args.out)
    rep.add("modulus", p)
    rep.add("claim", claimed_from_proof(proof))
    return EXIT_OK


def cmd_verify_sum(args, rep: Report, verb: str) -> int:
    C, p = sum_target(args, verb)
    if args.rounds >= 2:
        t = load_transcript(args.replay or need(args, "proof"))
        out = sums.replay_multiround(C, t)
        return report_sum(rep, out)
    claim = sums.SumClaim(C, p, int(need(args, "claim")))
    if args.replay:
        t = load_transcript(args.replay)
        proof, coins = proof_from_transcript(t), ReplayCoins.from_transcript(t)
    else:
        proof, coins = parse_proof(read_bytes(need(args, "proof"))), Coins(args.seed)
    out = sums.verify_sum(claim, proof, coins, args.error_exp)
    code = report_sum(rep, out)
    if not args.replay:
        hdr = {**proof.params.as_dict(), "p": p, "claimed": claim.claimed}
        emit_transcript(args, one_round_transcript(verb, hdr, proof, coins, out.accepted))
    return code


def cmd_sat(args, rep: Report) -> int:
    F = formula_arg(args)
    out = sums.certify_sat(F, args.error_exp, Coins(args.seed), args.rounds)
    emit_transcript(args, out.transcript)
    code = report_sum(rep, out)
    if out.accepted:
        rep.add("count", out.total)
    return code


def cmd_permanent(args, rep: Report) -> int:
    M = parse_matrix(read_text(need(args, "matrix")))
    out, p = sums.certify_permanent(M, args.error_exp, Coins(args.seed), args.rounds)
    emit_transcript(args, out.transcript)
    code = report_sum(rep, out)
    rep.add("modulus", p)
    if out.accepted:
        rep.add("permanent", sums.signed(out.total, p))
    return code


def cmd_hamcycles(args, rep: Report) -> int:
    G = parse_edge_list(read_text(need(args, "graph")), directed=args.directed)
    out = sums.certify_hamcycles(G, args.error_exp, Coins(args.seed), args.rounds)
    emit_transcript(args, out.transcript)
    code = report_sum(rep, out)
    if out.accepted:
        rep.add("cycles", sums.hamcycles_from_total(G, out.total))
    return code


# -- QBF and applications ------------------------------------------------------------

def cmd_qbf(args, rep: Report) -> int:
    phi = qbf_arg(args)
    params = qbf_mod.QbfParams(delta=Fraction(args.delta), prime_interval_exp=args.prime_exp,
                               eps_exp=args.error_exp)
    if args.replay:
        out = qbf_mod.replay_qbf(phi, load_transcript(args.replay), params)
    else:
        out = qbf_mod.qbf_run(phi, params, Coins(args.seed))
        emit_transcript(args, out.transcript)
    rep.add("result", "accepted" if out.accepted else f"rejected ({out.reason})")
    if out.accepted:
        rep.add("value", out.value)
    else:
        rep.add("detail", out.detail)
    rep.add("prime", out.p)
    rep.add("negated", out.negated)
    rep.add("prime_exp", out.prime_exp)
    rep.add("prime_failure_bound", f"{out.prime_failure_bound:.3e}")
    rep.add("eval_error_bound", f"{out.eval_error_bound:.3e}")
    rep.add("coins", out.coins_used)
    return outcome_code(out.accepted, out.reason)


def run_app(args, rep: Report, inst) -> int:
    out = apps.certify(inst, args.error_exp, Coins(args.seed))
    rep.add("modulus", inst.p)
    rep.add("result", "accepted" if out.accepted else f"rejected ({out.reason})")
    if out.accepted:
        rep.add("counts", out.values)
    else:
        rep.add("detail", out.detail)
    rep.add("coins", out.coins_used)
    return outcome_code(out.accepted, out.reason)


def cmd_ov(args, rep: Report) -> int:
    A = parse_vectors(read_text(need(args, "vectors")))
    return run_app(args, rep, apps.ov_instance(A))


def cmd_hamming(args, rep: Report) -> int:
    A = parse_vectors(read_text(need(args, "vectors")))
    return run_app(args, rep, apps.hamming_instance(A, need(args, "k")))


def cmd_clique(args, rep: Report) -> int:
    G = parse_edge_list(read_text(need(args, "graph")))
    k = need(args, "k")
    inst = apps.kclique_instance(G, k)
    if not inst.points:
        rep.add("result", "accepted")
        rep.add("cliques", 0)
        return EXIT_OK
    out = apps.certify(inst, args.error_exp, Coins(args.seed))
    rep.add("modulus", inst.p)
    code = report_eval(rep, out)
    if out.accepted:
        total = sum(out.values) % inst.p
        count, rem = divmod(total, inst.multiplicity)
        if rem:
            raise ProtocolError(f"certified sum {total} is not a multiple of {inst.multiplicity}")
        rep.add("cliques", count)
    return code


def cmd_upit(args, rep: Report) -> int:
    C1 = parse_circuit(read_text(need(args, "circuit1")))
    C2 = parse_circuit(read_text(need(args, "circuit2")))
    q, _ = field_base(args.field, 101)
    coins = Coins(args.seed)
    equal_random = upit_random(C1, C2, coins, q, args.error_exp)
    rep.add("randomized", "equal" if equal_random else "different")
    rep.add("coins", coins.bits_used)
    if args.deterministic:
        rep.add("deterministic", "equal" if upit_deterministic(C1, C2, q) else "different")
    return EXIT_OK


def cmd_oracle(args, rep: Report) -> int:
    problem = args.problem
    if problem == "sat":
        rep.add("count", oracles.oracle_sat(formula_arg(args)))
    elif problem == "qbf":
        rep.add("value", oracles.oracle_qbf(qbf_arg(args)))
    elif problem == "permanent":
        rep.add("permanent", oracles.oracle_permanent(parse_matrix(read_text(need(args, "matrix")))))
    elif problem == "hamcycles":
        G = parse_edge_list(read_text(need(args, "graph")), directed=args.directed)
        rep.add("cycles", oracles.oracle_hamcycles(G))
    elif problem == "ov":
        rep.add("counts", oracles.oracle_ov(parse_vectors(read_text(need(args, "vectors")))))
    elif problem == "hamming":
        rep.add("counts", oracles.oracle_hamming(parse_vectors(read_text(need(args, "vectors"))), need(args, "k")))
    elif problem == "clique":
        G = parse_edge_list(read_text(need(args, "graph")))
        rep.add("cliques", oracles.oracle_cliques(G, need(args, "k")))
    elif problem == "eval":
        C = parse_circuit(read_text(need(args, "circuit")))
        points = parse_int_csv(read_text(need(args, "points")))
        rep.add("values", oracles.oracle_multipoint(C, points, args.modulus))
    elif problem == "sum":
        C = parse_circuit(read_text(need(args, "circuit")))
        rep.add("sum", oracles.oracle_cube_sum(C, args.modulus))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="verifier coin seed (default 0)")
    g.add_argument("--error-exp", type=int, default=sums.DEFAULT_EPS_EXP,
                   help="soundness error 2^-t (default 40)")
    g.add_argument("--field", help="base field override q^l")
    g.add_argument("--rounds", type=int, default=1, help="rounds for sum protocols (default 1)")
    g.add_argument("--count-ops", action="store_true", help="report field-operation counts")
    g.add_argument("--transcript", help="write the protocol transcript (JSON) here")
    g.add_argument("--replay", help="re-verify a recorded transcript with its recorded coins")
    return p


def _inputs(p: argparse.ArgumentParser, *names: str) -> None:
    helps = {
        "circuit": "circuit file (.actxt)", "points": "points CSV", "proof": "proof file",
        "out": "output path", "claim": "claimed sum", "modulus": "prime modulus",
        "formula": "formula text", "formula_file": "formula file", "qbf": "QBF text", "qbf_file": "QBF file",
        "matrix": "matrix CSV", "graph": "edge list", "vectors": "0/1 vectors CSV", "k": "k",
        "circuit1": "first circuit", "circuit2": "second circuit",
    }
    ints = {"claim", "modulus", "k"}
    for name in names:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=int if name in ints else str,
                       help=helps[name])


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="maproof", description="Merlin-Arthur batch-evaluation proofs",
                                     epilog="global options go after the verb, e.g. 'maproof sat --seed 3 ...'")
    verbs = parser.add_subparsers(dest="verb", required=True)

    for action in ("prove", "verify"):
        sp = verbs.add_parser(action, help=f"{action} an evaluation, sum or #SAT claim")
        kinds = sp.add_subparsers(dest="kind", required=True)
        ev = kinds.add_parser("eval", parents=[common])
        _inputs(ev, "circuit", "points", *(("out",) if action == "prove" else ("proof",)))
        su = kinds.add_parser("sum", parents=[common])
        _inputs(su, "circuit", "modulus", *(("out",) if action == "prove" else ("proof", "claim")))
        sa = kinds.add_parser("sat", parents=[common])
        _inputs(sa, "formula", "formula_file", *(("out",) if action == "prove" else ("proof", "claim")))

    _inputs(verbs.add_parser("sat", parents=[common], help="count satisfying assignments"),
            "formula", "formula_file")
    q = verbs.add_parser("qbf", parents=[common], help="decide a quantified Boolean formula")
    _inputs(q, "qbf", "qbf_file")
    q.add_argument("--delta", default="2/3", help="suffix fraction (default 2/3)")
    q.add_argument("--prime-exp", type=int, default=None, help="prime interval exponent E")
    _inputs(verbs.add_parser("permanent", parents=[common], help="permanent of an integer matrix"), "matrix")
    h = verbs.add_parser("hamcycles", parents=[common], help="count Hamiltonian cycles")
    _inputs(h, "graph")
    h.add_argument("--directed", action="store_true")
    _inputs(verbs.add_parser("ov", parents=[common], help="orthogonal-vector counts"), "vectors")
    _inputs(verbs.add_parser("hamming", parents=[common], help="Hamming-neighbour counts"), "vectors", "k")
    _inputs(verbs.add_parser("clique", parents=[common], help="count k-cliques"), "graph", "k")
    u = verbs.add_parser("upit", parents=[common], help="univariate identity test")
    _inputs(u, "circuit1", "circuit2")
    u.add_argument("--deterministic", action="store_true", help="also run the interpolation test")
    o = verbs.add_parser("oracle", parents=[common], help="brute-force reference answers")
    o.add_argument("problem", choices=["sat", "qbf", "permanent", "hamcycles", "ov", "hamming", "clique",
                                       "eval", "sum"])
    _inputs(o, "formula", "formula_file", "qbf", "qbf_file", "matrix", "graph", "vectors", "k", "circuit",
            "points", "modulus")
    o.add_argument("--directed", action="store_true")
    return parser


def dispatch(args, rep: Report) -> int:
    if args.verb in ("prove", "verify"):
        if args.kind == "eval":
            return cmd_prove_eval(args, rep) if args.verb == "prove" else cmd_verify_eval(args, rep)
        fn = cmd_prove_sum if args.verb == "prove" else cmd_verify_sum
        return fn(args, rep, args.kind)
    table = {"sat": cmd_sat, "qbf": cmd_qbf, "permanent": cmd_permanent, "hamcycles": cmd_hamcycles,
             "ov": cmd_ov, "hamming": cmd_hamming, "clique": cmd_clique, "upit": cmd_upit, "oracle": cmd_oracle}
    return table[args.verb](args, rep)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    if args.rounds < 1:
        print("error: --rounds must be >= 1", file=sys.stderr)
        return EXIT_MALFORMED
    rep = Report()
    counter = OpCounter()
    try:
        with counting(counter):
            code = dispatch(args, rep)
    except ProtocolError as exc:
        rep.add("result", "rejected (unsound)")
        rep.add("detail", str(exc))
        code = EXIT_REJECT
    except MAError as exc:
        sys.stdout.write(rep.render())
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.count_ops:
        for ph, kinds in counter.as_dict().items():
            for kind, n in kinds.items():
                rep.add(f"ops.{ph}.{kind}", n)
    sys.stdout.write(rep.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
