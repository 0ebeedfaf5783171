"""Command-line entry point: ``galg <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np

from galg import codes, mdpc
from galg.algebra import AlgebraElement, invert, is_unit
from galg.errors import GalgError, NotInvertibleError, ParseError
from galg.groups import FiniteGroup, element_order, parse_group_spec
from galg.linalg import FieldMatrix
from galg.matrep import abelian_decompose, representation_matrix
from galg.selftest import run_selftest


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _emit(text: str, out: str | None) -> None:
    """Print, or write atomically to ``out`` (temp file in the same directory, then rename)."""
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


_TERM = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?(\S+?)\s*$")


def parse_element(text: str, group: FiniteGroup | None, p: int) -> AlgebraElement:
    """Inline element forms: ``support=[...]``, ``coeffs=[...]``, ``terms=1+x+x^2``, or a JSON file path."""
    key, sep, value = text.partition("=")
    if sep and key in ("support", "coeffs", "terms"):
        if group is None:
            raise ParseError("inline elements need --group")
        if key == "terms":
            terms = {}
            for part in value.split("+"):
                m = _TERM.match(part)
                if not m:
                    raise ParseError(f"bad term {part!r}")
                coeff, label = int(m.group(1) or 1), m.group(2)
                terms[label] = terms.get(label, 0) + coeff
            try:
                return AlgebraElement.from_terms(group, p, terms)
            except KeyError as exc:
                raise ParseError(str(exc)) from None
        try:
            data = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON list in {text!r}: {exc}") from None
        if key == "coeffs":
            return AlgebraElement(group, p, data)
        return AlgebraElement.from_support(group, p, data)
    path = Path(text[1:] if text.startswith("@") else text)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ParseError(f"{text!r} is neither an inline element nor a readable file") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return AlgebraElement.from_dict(data, group)


def _group(args) -> FiniteGroup | None:
    return parse_group_spec(args.group) if getattr(args, "group", None) else None


def _element(args, text: str) -> AlgebraElement:
    return parse_element(text, _group(args), args.p)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None


# subcommands


def cmd_group_info(args) -> int:
    G = parse_group_spec(args.group)
    info = {
        "spec": G.spec,
        "order": G.order,
        "abelian": G.is_abelian,
        "cyclic_factors": list(G.cyclic_factors) if G.cyclic_factors else None,
        "labels": list(G.labels),
        "element_orders": [element_order(G, i) for i in range(G.order)],
    }
    if args.table:
        info["mul_table"] = G.mul_table.tolist()
    _emit(_dump(info), args.out)
    return 0


def cmd_elem(args) -> int:
    f = _element(args, args.elem)
    if args.mul:
        f = f * _element(args, args.mul)
    if args.add:
        f = f + _element(args, args.add)
    if args.pow is not None:
        f = f ** args.pow
    out = f.to_dict()
    out["weight"] = f.weight
    out["repr"] = repr(f)
    _emit(_dump(out), args.out)
    return 0


def _symbolic_matrix(G: FiniteGroup) -> str:
    # entry (i, j) is a_k where g_k g_j = g_i
    n = G.order
    idx = np.arange(n)
    rows = []
    for i in range(n):
        ks = G.mul_idx(i, G.inv_idx(idx))
        rows.append(" ".join(f"a{int(k) + 1}" for k in ks))
    return "\n".join(rows) + "\n"


def cmd_repmat(args) -> int:
    if args.symbolic:
        G = parse_group_spec(args.group)
        _emit(_symbolic_matrix(G), args.out)
        return 0
    if not args.elem:
        raise ParseError("repmat needs --elem or --symbolic")
    M = representation_matrix(_element(args, args.elem))
    _emit(_dump(M.data.tolist()) if args.format == "json" else M.to_text(), args.out)
    return 0


def cmd_decompose(args) -> int:
    d = abelian_decompose(_element(args, args.elem), check_chain=args.check_chain)
    _emit(_dump(d.to_dict()), args.out)
    return 0


def cmd_is_unit(args) -> int:
    _emit("true\n" if is_unit(_element(args, args.elem)) else "false\n", args.out)
    return 0


def cmd_invert(args) -> int:
    _emit(_dump(invert(_element(args, args.elem)).to_dict()), args.out)
    return 0


def cmd_tanner(args) -> int:
    if args.classic:
        if args.p is None or args.a is None or args.b is None:
            raise ParseError("--classic needs --p, --a and --b as integers")
        H = codes.tanner_classic(args.p, int(args.a), int(args.b))
    else:
        if not (args.group and args.a and args.b):
            raise ParseError("generalized Tanner needs --group, --a and --b elements")
        p = args.p if args.p is not None else 2
        G = parse_group_spec(args.group)
        H = codes.tanner_parity(
            parse_element(args.a, G, p), parse_element(args.b, G, p), args.include_zero_exponent
        )
    if args.rank:
        r = codes.gf2_rank(H)
        _emit(f"rows={H.rows} cols={H.cols} rank={r} dim={H.cols - r}\n", args.out)
    else:
        _emit(codes.alist_export(H), args.out)
    return 0


def _params_from_args(args) -> mdpc.SchemeParams:
    params = mdpc.derive_params(args.group, args.threshold_rule, args.max_iters)
    if args.w is not None or args.t is not None:
        params = mdpc.SchemeParams(
            params.group_spec,
            params.n,
            args.w if args.w is not None else params.w,
            args.t if args.t is not None else params.t,
            params.threshold_rule,
            params.max_iters,
        )
    return params


def cmd_mdpc_keygen(args) -> int:
    params = _params_from_args(args)
    sk, pk = mdpc.keygen(params, np.random.default_rng(args.seed))
    if args.sk_out or args.pk_out:
        if args.sk_out:
            _emit(_dump(sk.to_dict()), args.sk_out)
        if args.pk_out:
            _emit(_dump(pk.to_dict()), args.pk_out)
    else:
        _emit(_dump({"sk": sk.to_dict(), "pk": pk.to_dict()}), args.out)
    return 0


def _key_blob(path: str, name: str) -> dict:
    data = _load_json(path)
    return data[name] if name in data and "params" not in data else data


def cmd_mdpc_encrypt(args) -> int:
    pk = mdpc.PublicKey.from_dict(_key_blob(args.pk, "pk"))
    G = pk.params.group
    if args.message_hex is not None:
        try:
            raw = bytes.fromhex(args.message_hex)
        except ValueError:
            raise ParseError(f"--message-hex is not hexadecimal: {args.message_hex!r}") from None
        bits = [int(b) for b in "".join(f"{byte:08b}" for byte in raw)]
        e1, e2 = mdpc.encode_message_elements(bits, pk.params)
    elif args.e1 is not None and args.e2 is not None:
        e1, e2 = parse_element(args.e1, G, 2), parse_element(args.e2, G, 2)
    else:
        raise ParseError("mdpc-encrypt needs --e1 and --e2, or --message-hex")
    ct = mdpc.encrypt(pk, e1, e2)
    out = ct.to_dict()
    if args.message_hex is not None:
        out["message_bits"] = 8 * len(bytes.fromhex(args.message_hex))
    _emit(_dump(out), args.out)
    return 0


def cmd_mdpc_decrypt(args) -> int:
    sk = mdpc.PrivateKey.from_dict(_key_blob(args.sk, "sk"))
    ct_data = _load_json(args.ct)
    ct = mdpc.Ciphertext.from_dict(ct_data, sk.params.group)
    res = mdpc.decrypt(sk, ct)
    out = {
        "success": res.success,
        "reason": res.reason,
        "iterations": res.decode.iterations,
        "syndrome_weight_trace": list(res.decode.syndrome_weight_trace),
    }
    if res.success:
        out["e1"] = res.e1.to_dict()
        out["e2"] = res.e2.to_dict()
        nbits = args.message_bits if args.message_bits is not None else ct_data.get("message_bits")
        if nbits:
            bits = mdpc.decode_message_elements(res.e1, res.e2, nbits)
            value = int("".join(map(str, bits)), 2)
            out["message_hex"] = value.to_bytes(nbits // 8, "big").hex() if nbits % 8 == 0 else format(value, "x")
    _emit(_dump(out), args.out)
    return 0 if res.success else 1


def cmd_dfr(args) -> int:
    params = _params_from_args(args)
    seeds = [args.seed + k for k in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(mdpc.dfr_trial, [params] * len(seeds), seeds))
    else:
        results = [mdpc.dfr_trial(params, s) for s in seeds]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "seed", "success", "reason", "iterations", "final_syndrome_weight"])
    for k, (seed, r) in enumerate(zip(seeds, results)):
        writer.writerow([k, seed, int(r.success), r.reason or "", r.decode.iterations, r.decode.syndrome_weight_trace[-1]])
    _emit(buf.getvalue(), args.out)
    failures = sum(not r.success for r in results)
    print(
        f"n={params.n} w={params.w} t={params.t} trials={len(results)} failures={failures} "
        f"dfr={failures / max(len(results), 1):.4f}",
        file=sys.stderr,
    )
    return 0


def cmd_alist(args) -> int:
    if args.from_matrix:
        M = FieldMatrix.from_text(Path(args.from_matrix).read_text())
        if M.p != 2:
            raise ParseError("alist holds binary matrices only")
        _emit(codes.alist_export(codes.ParityCheck.from_dense(M.data)), args.out)
    elif args.to_matrix:
        H = codes.alist_import(Path(args.to_matrix).read_text())
        _emit(FieldMatrix(H.to_dense(), 2).to_text(), args.out)
    else:
        raise ParseError("alist needs --from-matrix or --to-matrix")
    return 0


def cmd_selftest(args) -> int:
    results = run_selftest()
    width = max(len(name) for name, _ in results)
    lines = [f"{name:<{width}}  {'PASS' if ok else 'FAIL'}" for name, ok in results]
    passed = sum(ok for _, ok in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if passed == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galg", description="Group algebras, their matrices, and codes built on them.")
    parser.add_argument("--json-errors", action="store_true", help="report domain errors as JSON on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, group=True, field=True, elem=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json-errors", action="store_true", default=argparse.SUPPRESS)
        if group:
            sp.add_argument("--group", help="group spec, e.g. cyclic:7 or product:cyclic:2,cyclic:4")
        if field:
            sp.add_argument("--p", type=int, default=2, help="field modulus")
        if elem:
            sp.add_argument("--elem", required=elem == "required")
        return sp

    sp = add("group-info", cmd_group_info, "describe a group", field=False)
    sp.add_argument("--table", action="store_true", help="include the Cayley table")

    sp = add("elem", cmd_elem, "element arithmetic", elem="required")
    sp.add_argument("--mul")
    sp.add_argument("--add")
    sp.add_argument("--pow", type=int)

    sp = add("repmat", cmd_repmat, "print the representation matrix", elem=True)
    sp.add_argument("--format", choices=["matrix-text", "json"], default="matrix-text")
    sp.add_argument("--symbolic", action="store_true", help="print entries as coefficient names a1..an")

    sp = add("decompose", cmd_decompose, "Kronecker decomposition over a product of cyclic groups", elem="required")
    sp.add_argument("--check-chain", action="store_true")

    add("is-unit", cmd_is_unit, "test invertibility", elem="required")
    add("invert", cmd_invert, "invert a unit", elem="required")

    sp = add("tanner", cmd_tanner, "Tanner-style quasi-cyclic parity-check matrices", field=False)
    sp.add_argument("--classic", action="store_true", help="Tanner's construction over F_2[C_p]")
    sp.add_argument("--p", type=int, help="prime p (classic) or field modulus (generalized)")
    sp.add_argument("--a", help="integer (classic) or element (generalized)")
    sp.add_argument("--b", help="integer (classic) or element (generalized)")
    sp.add_argument("--include-zero-exponent", type=_bool, default=True)
    sp.add_argument("--rank", action="store_true", help="print dimensions and F_2 rank instead of alist")

    def crypto_opts(sp):
        sp.add_argument("--w", type=int)
        sp.add_argument("--t", type=int)
        sp.add_argument("--threshold-rule", choices=list(codes.THRESHOLD_RULES), default="max")
        sp.add_argument("--max-iters", type=int, default=codes.DEFAULT_MAX_ITERS)

    sp = add("mdpc-keygen", cmd_mdpc_keygen, "generate a key pair", field=False)
    sp.add_argument("--sk-out")
    sp.add_argument("--pk-out")
    crypto_opts(sp)

    sp = add("mdpc-encrypt", cmd_mdpc_encrypt, "encrypt an error pair or a message", group=False, field=False)
    sp.add_argument("--pk", required=True)
    sp.add_argument("--e1")
    sp.add_argument("--e2")
    sp.add_argument("--message-hex")

    sp = add("mdpc-decrypt", cmd_mdpc_decrypt, "decrypt a ciphertext", group=False, field=False)
    sp.add_argument("--sk", required=True)
    sp.add_argument("--ct", required=True)
    sp.add_argument("--message-bits", type=int)

    sp = add("dfr", cmd_dfr, "Monte-Carlo decoding failure rate (CSV)", field=False)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--jobs", type=int, default=1)
    crypto_opts(sp)

    sp = add("alist", cmd_alist, "convert between matrix text and alist", group=False, field=False)
    sp.add_argument("--from-matrix")
    sp.add_argument("--to-matrix")

    add("selftest", cmd_selftest, "run the golden example checks", group=False, field=False)
    return parser


def _needs_group(args) -> None:
    if args.command in ("group-info", "mdpc-keygen", "dfr") and not args.group:
        raise ParseError(f"{args.command} needs --group")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _needs_group(args)
        return args.func(args)
    except (GalgError, OSError, KeyError, IndexError) as exc:
        if args.json_errors:
            payload = {"error": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
            if isinstance(exc, NotInvertibleError) and exc.witness is not None:
                payload["witness"] = exc.witness.to_dict()
            print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        else:
            print(f"galg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
