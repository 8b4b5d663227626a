"""Command-line front end: spec parsing, computations, verification, exports.

Every invocation handles one job: a group spec, an automorphism spec, and one
command.  Artifacts are JSON documents with all exact values in the canonical
cyclotomic text grammar; identical invocations produce byte-identical files
(every tie-break in the library is deterministic and there is no seed).

Exit codes: 0 success, 1 verification failure, 2 spec/argument parse error,
3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .groups import parse_group_spec, parse_automorphism_spec
from .modular import (Report, label_str, modular_data_of_double,
                      verify_axioms, verify_modular)
from .crossed import CrossedContext
from .shintani import ShintaniContext

__all__ = ["JobConfig", "main"]

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_COMPUTE = 3

CHECK_NAMES = ("all", "unitarity", "verlinde", "shintani", "asai")


class CliError(Exception):
    """A structured failure carrying the process exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class JobConfig:
    """One job: what to compute, for which pair, and where to put it."""
    group_spec: str
    aut_spec: str = "id"
    sector: Optional[int] = None
    m_values: Optional[List[int]] = None
    out: Optional[Path] = None
    fmt: str = "json"
    checks: List[str] = field(default_factory=lambda: ["all"])

    def job_dir(self) -> Path:
        if self.out is None:
            raise CliError(EXIT_PARSE, "parse: this command needs --out")
        return Path(self.out) / f"{_slug(self.group_spec)}__{_slug(self.aut_spec)}"


def _slug(s: str) -> str:
    out = re.sub(r"[^A-Za-z0-9._]+", "-", s.strip())
    return re.sub(r"-{2,}", "-", out).strip("-") or "x"


def _context(cfg: JobConfig) -> CrossedContext:
    try:
        group = parse_group_spec(cfg.group_spec)
        aut = parse_automorphism_spec(group, cfg.aut_spec)
    except ValueError as e:
        raise CliError(EXIT_PARSE, f"parse: {e}")
    try:
        return CrossedContext(group, aut)
    except Exception as e:
        raise CliError(EXIT_COMPUTE, f"compute: {e}")


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _parse_m(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    text = text.strip()
    m = re.fullmatch(r"(\d+)(?:\.\.|:)(\d+)", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo < 1 or hi < lo:
            raise CliError(EXIT_PARSE, f"parse: bad m range {text!r}")
        return list(range(lo, hi + 1))
    if text.isdigit() and int(text) >= 1:
        return [int(text)]
    raise CliError(EXIT_PARSE, f"parse: --m wants a positive integer or lo..hi, got {text!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_double(cfg: JobConfig) -> Dict[str, dict]:
    cc = _context(cfg)
    try:
        base = modular_data_of_double(cc.group)
        ext = cc.cover_modular_data().to_json_dict() if cc.N > 1 else None
    except Exception as e:
        raise CliError(EXIT_COMPUTE, f"compute: {e}")
    return {"modular.json": {"group": cfg.group_spec, "aut": cfg.aut_spec,
                             "base": base.to_json_dict(), "extension": ext}}


def cmd_crossed(cfg: JobConfig) -> Dict[str, dict]:
    cc = _context(cfg)
    sectors = [cfg.sector % cc.N] if cfg.sector is not None else list(range(cc.N))
    docs = {}
    for a in sectors:
        try:
            smat = cc.crossed_s_matrix(a)
        except Exception as e:
            raise CliError(EXIT_COMPUTE, f"compute: sector {a}: {e}")
        doc = smat.to_json_dict()
        doc.update(group=cfg.group_spec, aut=cfg.aut_spec)
        docs[f"crossed_a{a}.json"] = doc
    return docs


def cmd_kalgebra(cfg: JobConfig) -> Dict[str, dict]:
    cc = _context(cfg)
    try:
        sector_zero = cc.k_algebra(sectors=0)
        full = cc.k_algebra(sectors="all")
        chars, idems = cc.characters_and_idempotents()
    except Exception as e:
        raise CliError(EXIT_COMPUTE, f"compute: {e}")
    render = lambda table: {m: {label_str(c): v.render() for c, v in row.items()}
                            for m, row in table.items()}
    return {"kalgebra.json": {
        "group": cfg.group_spec, "aut": cfg.aut_spec,
        "sector_zero": sector_zero.to_json_dict(),
        "full": full.to_json_dict(),
        "characters": render(chars),
        "idempotents": render(idems),
    }}


def cmd_shintani(cfg: JobConfig) -> Dict[str, dict]:
    cc = _context(cfg)
    sc = ShintaniContext(cc)
    try:
        m_zero = sc.m_zero()
        ms = cfg.m_values if cfg.m_values is not None else list(range(1, m_zero + 1))
        docs = {}
        for m in ms:
            sh = sc.shintani_matrix(m)
            desc = sc.descent(m)
            doc = sh.to_json_dict()
            doc.update(group=cfg.group_spec, aut=cfg.aut_spec, m0=m_zero)
            doc["descent"] = {
                row: {kind: {label_str(c): v.render() for c, v in coords.items()}
                      for kind, coords in both.items()}
                for row, both in desc.items()}
            docs[f"shintani_m{m}.json"] = doc
    except CliError:
        raise
    except Exception as e:
        raise CliError(EXIT_COMPUTE, f"compute: {e}")
    return docs


def _verify_report(cfg: JobConfig) -> Report:
    cc = _context(cfg)
    want = set(cfg.checks) if cfg.checks else {"all"}
    unknown = want.difference(CHECK_NAMES)
    if unknown:
        raise CliError(EXIT_PARSE, f"parse: unknown check(s) {sorted(unknown)}")

    def on(name: str) -> bool:
        return "all" in want or name in want

    rep = Report(f"verification of {cfg.group_spec} with {cfg.aut_spec}")

    mod_checks = ("all",) if "all" in want else tuple(
        n for n in ("unitarity", "verlinde") if n in want)
    if mod_checks:
        try:
            base = modular_data_of_double(cc.group)
            sub = verify_modular(base, mod_checks)
            sub.title = "double"
            rep.extend(sub)
            if cc.N > 1:
                sub = verify_modular(cc.cover_modular_data(), mod_checks)
                sub.title = "extension double"
                rep.extend(sub)
        except Exception as e:
            rep.add("modular data construction", False, str(e))

    if "all" in want:
        try:
            sub = verify_axioms(cc.engine)
            rep.extend(sub)
        except Exception as e:
            rep.add("braiding and twist axioms", False, str(e))
        for a in range(cc.N):
            try:
                rep.extend(cc.verify_crossed(a))
            except Exception as e:
                rep.add(f"crossed S-matrix verification, sector {a}", False, str(e))
    elif on("unitarity"):
        from .linalg import Mat
        for a in range(cc.N):
            try:
                smat = cc.crossed_s_matrix(a)
                eye_r = cc.global_dim * Mat.identity(smat.rows)
                eye_c = cc.global_dim * Mat.identity(smat.cols)
                ok = (smat.S @ smat.S.conj_transpose() == eye_r
                      and smat.S.conj_transpose() @ smat.S == eye_c)
                rep.add(f"crossed unitarity, sector {a}", ok,
                        f"{len(smat.rows)}x{len(smat.cols)}")
            except Exception as e:
                rep.add(f"crossed unitarity, sector {a}", False, str(e))

    if on("verlinde"):
        try:
            chars, idems = cc.characters_and_idempotents()
            rep.add("characters, idempotents, and the fusion round trip", True,
                    f"{len(chars)} characters on a basis of {len(idems)}")
        except Exception as e:
            rep.add("characters, idempotents, and the fusion round trip", False, str(e))

    if on("shintani") or on("asai"):
        sc = ShintaniContext(cc)
    if on("shintani"):
        try:
            m_zero = sc.m_zero()
            rep.add("twist diagonal period", True, f"m0 = {m_zero}")
            for m in range(1, 2 * m_zero + 1):
                try:
                    rep.extend(sc.verify_decomposition(m))
                except Exception as e:
                    rep.add(f"Shintani decomposition, m = {m}", False, str(e))
            from .linalg import Mat
            for m in (1, m_zero):
                gram = sc.descent_gram(m)
                rep.add(f"descent basis orthonormal, m = {m}",
                        gram == Mat.identity(list(gram.rows)), "")
        except Exception as e:
            rep.add("Shintani suite", False, str(e))
    if on("asai"):
        try:
            rep.extend(sc.twisting_operator_check())
        except Exception as e:
            rep.add("twisting operator identity", False, str(e))
    return rep


def cmd_verify(cfg: JobConfig) -> int:
    rep = _verify_report(cfg)
    print(rep.render())
    if cfg.out is not None:
        doc = {"group": cfg.group_spec, "aut": cfg.aut_spec,
               "checks": sorted(set(cfg.checks)), "report": rep.to_json_dict()}
        path = cfg.job_dir() / "report.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_dump(doc), encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_OK if rep.passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# rendering stored artifacts (export)
# ---------------------------------------------------------------------------

def _table(rows: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
                     for r in rows)


def _matrix_rows(rows: List[str], cols: List[str], entries: List[List[str]],
                 corner: str = "") -> List[List[str]]:
    out = [[corner] + list(cols)]
    for r, line in zip(rows, entries):
        out.append([r] + [str(v) for v in line])
    return out


def _csvs_for(name: str, doc: dict) -> Dict[str, List[List[str]]]:
    tables: Dict[str, List[List[str]]] = {}
    stem = name[:-len(".json")]
    if name == "modular.json":
        for part in ("base", "extension"):
            sub = doc.get(part)
            if not sub:
                continue
            tables[f"{stem}_{part}_S.csv"] = _matrix_rows(
                sub["labels"], sub["labels"], sub["S"], "label")
            tables[f"{stem}_{part}_T.csv"] = [["label", "T", "dim"]] + [
                [l, t, str(d)] for l, t, d in zip(sub["labels"], sub["T"], sub["dims"])]
    elif name.startswith("crossed_a"):
        tables[f"{stem}_S.csv"] = _matrix_rows(doc["rows"], doc["cols"], doc["S"], "label")
        tables[f"{stem}_psi.csv"] = [["label", "side", "leading"]] + \
            [[l, "row", v] for l, v in sorted(doc["psi_rows"].items())] + \
            [[l, "col", v] for l, v in sorted(doc["psi_cols"].items())]
    elif name == "kalgebra.json":
        rows = [["left", "right", "result", "value"]]
        for pair, prods in sorted(doc["full"]["structure"].items()):
            left, right = pair.split("*")
            for res, val in sorted(prods.items()):
                rows.append([left, right, res, val])
        tables[f"{stem}_structure.csv"] = rows
        for part in ("characters", "idempotents"):
            rows = [["column", "class", "value"]]
            for m, coords in sorted(doc[part].items()):
                for c, val in sorted(coords.items()):
                    rows.append([m, c, val])
            tables[f"{stem}_{part}.csv"] = rows
    elif name.startswith("shintani_m"):
        tables[f"{stem}_S.csv"] = _matrix_rows(doc["rows"], doc["cols"], doc["Sh"], "label")
        rows = [["label", "kind", "value"]]
        for l, v in sorted(doc["eta"].items()):
            rows.append([l, "eta", v])
        for l, v in sorted(doc["twists"]["T_prime"].items()):
            rows.append([l, "T_prime", v])
        for l, v in sorted(doc["twists"]["T"].items()):
            rows.append([l, "T", v])
        tables[f"{stem}_twists.csv"] = rows
    elif name == "report.json":
        rows = [["check", "passed", "detail"]]
        for c in doc["report"]["checks"]:
            rows.append([c["name"], "pass" if c["passed"] else "FAIL", c["detail"]])
        tables[f"{stem}.csv"] = rows
    return tables


def _pretty_for(name: str, doc: dict) -> str:
    blocks: List[str] = [f"# {name}  ({doc.get('group')} with {doc.get('aut')})"]
    for csvname, rows in sorted(_csvs_for(name, doc).items()):
        blocks.append(csvname[:-len(".csv")].replace("_", " "))
        blocks.append(_table(rows))
    if name.startswith("shintani_m"):
        blocks.insert(1, f"m = {doc['m']}, m0 = {doc['m0']}")
    return "\n\n".join(blocks) + "\n"


def _csv_text(rows: List[List[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_export(cfg: JobConfig) -> int:
    d = cfg.job_dir()
    if not d.is_dir():
        raise CliError(EXIT_COMPUTE, f"compute: no artifact directory {d}")
    names = sorted(p.name for p in d.glob("*.json"))
    if not names:
        raise CliError(EXIT_COMPUTE, f"compute: no JSON artifacts in {d}")
    for name in names:
        path = d / name
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise CliError(EXIT_COMPUTE, f"compute: {path}: {e}")
        if cfg.fmt == "json":
            # canonical re-serialization; proves the parse round trip
            path.write_text(_dump(doc), encoding="utf-8")
            print(f"rewrote {path}")
        elif cfg.fmt == "csv":
            for csvname, rows in sorted(_csvs_for(name, doc).items()):
                (d / csvname).write_text(_csv_text(rows), encoding="utf-8")
                print(f"wrote {d / csvname}")
        else:
            print(_pretty_for(name, doc))
    return EXIT_OK


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _emit(cfg: JobConfig, docs: Dict[str, dict]) -> int:
    if cfg.out is not None:
        d = cfg.job_dir()
        d.mkdir(parents=True, exist_ok=True)
        for name in sorted(docs):
            path = d / name
            path.write_text(_dump(docs[name]), encoding="utf-8")
            print(f"wrote {path}")
    else:
        for name in sorted(docs):
            if cfg.fmt == "pretty":
                print(_pretty_for(name, docs[name]))
            elif cfg.fmt == "csv":
                for csvname, rows in sorted(_csvs_for(name, docs[name]).items()):
                    sys.stdout.write(f"# {csvname}\n{_csv_text(rows)}")
            else:
                sys.stdout.write(_dump(docs[name]))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", required=True, metavar="SPEC",
                        help="cyclic:N, dihedral:N, sym:N, alt:N, klein, product:a,b")
    common.add_argument("--aut", default="id", metavar="SPEC",
                        help="id, inv, swap, pow:K, inner:gI, map:..., images:[...]")
    common.add_argument("--sector", type=int, default=None,
                        help="restrict to one sector (default: all)")
    common.add_argument("--m", default=None, metavar="M|LO..HI",
                        help="Shintani levels (default: 1..m0)")
    common.add_argument("--out", default=None, metavar="DIR",
                        help="artifact root; files go to DIR/<group>__<aut>/")
    common.add_argument("--format", default="json", choices=("json", "csv", "pretty"),
                        dest="fmt", help="stdout/export format")
    common.add_argument("--check", action="append", choices=CHECK_NAMES, default=None,
                        help="verification families (repeatable; default all)")

    p = argparse.ArgumentParser(
        prog="crossed-s",
        description="Exact crossed S-matrices, fusion algebras, and Shintani "
                    "descent for doubles of finite groups with an automorphism.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("double", parents=[common],
                   help="modular data of the double and of its extension")
    sub.add_parser("crossed", parents=[common],
                   help="crossed S-matrices with their scalar choices")
    sub.add_parser("kalgebra", parents=[common],
                   help="fusion algebras, characters, idempotents")
    sub.add_parser("shintani", parents=[common],
                   help="Shintani matrices, twist diagonals, descent bases")
    sub.add_parser("verify", parents=[common],
                   help="run the identity suite; exit 0 iff everything passes")
    sub.add_parser("export", parents=[common],
                   help="convert stored JSON artifacts to CSV or pretty tables")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = JobConfig(
            group_spec=args.group,
            aut_spec=args.aut,
            sector=args.sector,
            m_values=_parse_m(args.m),
            out=Path(args.out) if args.out is not None else None,
            fmt=args.fmt,
            checks=list(args.check) if args.check else ["all"],
        )
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "export":
            return cmd_export(cfg)
        builders = {"double": cmd_double, "crossed": cmd_crossed,
                    "kalgebra": cmd_kalgebra, "shintani": cmd_shintani}
        return _emit(cfg, builders[args.command](cfg))
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except Exception as e:  # anything unplanned is a computation error
        print(f"error: compute: {e}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
