"""Command-line harness: ``linklab <subcommand> [options]``.

Every output is a pure function of the subcommand, its flags and ``--seed``.
Work is split into ``--streams`` independent random streams; stream ``j``
handles a contiguous block of sample indices, and results are merged in
stream order, so the output does not depend on scheduling.
"""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import census, diagram as dg, tangle as tg
from .cmap import edge_connectivity_at_least_3
from .errors import ClassificationError, LinkLabError, MissingDataError, TangleValidationError
from .sampler import (SQ_CAP, RandomStream, assign_crossings, sample_four_valent,
                      sample_quadrangulation, sample_sq, sq_face_degrees)
from .stats import MomentAccumulator, normalized_histogram

CSV_HEADER = "# linklab-csv v1"
CLASSES = ("q4v", "sq", "alternating", "uniform")


# ---------------------------------------------------------------- helpers

def parse_range(text):
    """'2..5' -> [2, 3, 4, 5]; '8,10,12' -> [8, 10, 12]; '7' -> [7]."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _blocks(count, streams):
    streams = max(1, int(streams))
    return [(j, j * count // streams, (j + 1) * count // streams) for j in range(streams)]


def _run_streams(fn, jobs, streams):
    if streams > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=streams) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


class _Output:
    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        self.fh = open(self.path, "w", newline="") if self.path and self.path != "-" else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not sys.stdout:
            self.fh.close()


def _csv_writer(fh):
    fh.write(CSV_HEADER + "\n")
    return csv.writer(fh, lineterminator="\n")


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return x


def _warn(msg):
    print(f"linklab: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- sampling

def _draw(cls, n, stream, max_tries=10**9):
    if cls == "q4v":
        return assign_crossings(sample_four_valent(n, stream), "alternating")
    if cls in ("sq", "alternating"):
        return assign_crossings(sample_sq(n, stream, max_tries), "alternating")
    if cls == "uniform":
        return assign_crossings(sample_four_valent(n, stream), "uniform", stream)
    raise ValueError(f"unknown class {cls!r}")


def _diagram_id(seed, stream_id, index):
    return f"s{seed}-t{stream_id}-i{index}"


def _sample_block(job):
    cls, n, seed, stream_id, lo, hi = job
    s = RandomStream(seed, stream_id)
    out = []
    for i in range(lo, hi):
        d = _draw(cls, n, s)
        out.append((_diagram_id(seed, stream_id, i), d))
    return out


def _check_feasible(cls, n):
    if cls in ("sq", "alternating") and n > SQ_CAP:
        from .errors import FeasibilityError

        raise FeasibilityError(
            f"class {cls} at n={n} exceeds the rejection sampler's feasibility cap ({SQ_CAP})")
    if n < (2 if cls in ("sq", "alternating") else 1):
        raise ValueError(f"n={n} too small for class {cls}")


def sample_diagrams(cls, n, count, seed, streams=1):
    _check_feasible(cls, n)
    jobs = [(cls, n, seed, j, lo, hi) for j, lo, hi in _blocks(count, streams)]
    out = []
    for block in _run_streams(_sample_block, jobs, streams):
        out.extend(block)
    return out


def _write_diagrams(fh, rows, fmt):
    if fmt == "pd":
        for did, d in rows:
            fh.write(f"{did}\t{dg.export_pd(d)}\n")
    elif fmt == "csv":
        _write_stats_rows(fh, rows)
    else:
        for did, d in rows:
            fh.write(dg.to_json(d, id=did) + "\n")


def _diagram_row(did, d):
    ft = dg.face_type(d)
    twist = lo = hi = ""
    if dg.is_torus_2n(d) or edge_connectivity_at_least_3(d.shadow):
        twist = dg.twist_number(d)
    try:
        b = dg.volume_bounds(d)
        lo, hi = b.lower, b.upper
    except ClassificationError:
        pass
    return [did, d.n_crossings] + ft.as_list(2, 3 * d.n_crossings) + [
        twist, dg.component_count(d), _fmt(lo), _fmt(hi)]


def _write_stats_rows(fh, rows):
    w = _csv_writer(fh)
    width = max((3 * d.n_crossings for _, d in rows), default=2)
    w.writerow(["diagram_id", "n"] + [f"F_{i}" for i in range(2, width + 1)]
               + ["twist", "components", "lower_bound", "upper_bound"])
    for did, d in rows:
        r = _diagram_row(did, d)
        pad = width - 3 * d.n_crossings
        w.writerow(r[:2 + 3 * d.n_crossings - 1] + [0] * pad + r[2 + 3 * d.n_crossings - 1:])


def cmd_sample(args):
    rows = sample_diagrams(args.diagram_class, args.n, args.count, args.seed, args.streams)
    fmt = args.format or "json"
    with _Output(args.out) as fh:
        _write_diagrams(fh, rows, fmt)
    manifest = {"subcommand": "sample", "class": args.diagram_class, "n": args.n,
                "count": len(rows), "seed": args.seed, "streams": args.streams,
                "rng": "PCG64 via SeedSequence(seed, spawn_key=(stream_id,))",
                "format": fmt, "ids": [did for did, _ in rows]}
    text = json.dumps(manifest, indent=1)
    if args.out and args.out != "-":
        with open(args.out + ".manifest.json", "w") as fh:
            fh.write(text + "\n")
    elif args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(text + "\n")
    return 0


# ---------------------------------------------------------------- census

def _census_value(formula, n=None, m=None, p=None, N=None):
    if formula == "q":
        return Fraction(census.count_q(n))
    if formula == "q_boundary":
        return Fraction(census.count_q_boundary(n, p))
    if formula == "sq":
        return Fraction(census.count_sq(n))
    if formula == "sq_m":
        return Fraction(census.count_sq_m(n, m))
    if formula == "p_root_face":
        return census.prob_root_face(n, m)
    if formula == "expected_m_gons":
        return census.expected_m_gons(n, m)
    if formula == "table_4m_p":
        return Fraction(4, m) * census.prob_root_face(n, m)
    if formula == "p_n2":
        return census.p_n2_expansion(n)[0]
    if formula == "tangle_prob":
        return census.tangle_prob(n, p, N)
    raise ValueError(f"unknown formula {formula!r}")


FORMULAS = ("q", "q_boundary", "sq", "sq_m", "p_root_face", "expected_m_gons", "p_n2",
            "tangle_prob", "table_4m_p")


def _parse_kv(items):
    out = {}
    for it in items or []:
        k, _, v = it.partition("=")
        out[k.strip()] = v.strip()
    return out


def cmd_census(args):
    if args.table_4m_p is not None:
        kv = _parse_kv(args.table_4m_p)
        formula = "table_4m_p"
        ns = parse_range(kv.get("n", "1000"))
        ms = parse_range(kv.get("m", "2..7"))
        ps, Ns = [None], [None]
    else:
        formula = args.formula
        ns = parse_range(args.n) if args.n else [None]
        ms = parse_range(args.m) if args.m else [None]
        ps = parse_range(args.p) if args.p else [None]
        Ns = parse_range(args.N) if args.N else [None]
    with _Output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["formula", "n", "m", "p", "N", "exact_numerator", "exact_denominator",
                    "float_value"])
        for n in ns:
            for m in ms:
                for p in ps:
                    for N in Ns:
                        v = _census_value(formula, n, m, p, N)
                        w.writerow([formula, "" if n is None else n, "" if m is None else m,
                                    "" if p is None else p, "" if N is None else N,
                                    v.numerator, v.denominator, repr(float(v))])
    return 0


# ---------------------------------------------------------------- stats

OBSERVABLES = ("bigons", "facetype", "twist", "components", "volume_bounds", "volume")


def _load_volumes(path):
    vols = {}
    with open(path, newline="") as fh:
        rows = [r for r in fh if not r.startswith("#")]
    for r in csv.DictReader(rows):
        if r.get("diagram_id") and r.get("volume") not in (None, ""):
            vols[r["diagram_id"]] = float(r["volume"])
    return vols


def _stats_block(job):
    observable, cls, n, seed, stream_id, lo, hi, vols = job
    accs = {}
    values = {}

    def push(key, x):
        accs.setdefault(key, MomentAccumulator()).add(x)
        values.setdefault(key, []).append(x)

    if observable == "bigons" and cls in ("sq", "alternating"):
        # fast path: face degrees straight from the rejection kernel
        s = RandomStream(seed, stream_id)
        hist, _ = sq_face_degrees(n, hi - lo, s)
        for x in hist[:, 2]:
            push("bigons", float(x))
        return accs, values
    s = RandomStream(seed, stream_id)
    for i in range(lo, hi):
        d = _draw(cls, n, s)
        did = _diagram_id(seed, stream_id, i)
        if observable == "bigons":
            push("bigons", float(dg.face_type(d)[2]))
        elif observable == "facetype":
            ft = dg.face_type(d)
            for k in range(2, 3 * n + 1):
                push(f"F_{k}", float(ft[k]))
        elif observable == "twist":
            push("twist", float(dg.twist_number(d)))
        elif observable == "components":
            push("components", float(dg.component_count(d)))
        elif observable == "volume_bounds":
            b = dg.volume_bounds(d)
            push("lower_bound", b.lower)
            push("upper_bound", b.upper)
        elif observable == "volume":
            if did in vols:
                push("volume", vols[did])
    return accs, values


def cmd_stats(args):
    if args.observable == "volume":
        if not args.volumes:
            raise MissingDataError("the volume observable needs --volumes with joined data")
        vols = _load_volumes(args.volumes)
        if not vols:
            raise MissingDataError(f"no volumes found in {args.volumes}")
    else:
        vols = None
    bins = None
    if args.emit_hist:
        bins = int(_parse_kv([args.emit_hist]).get("bins", args.emit_hist))
    rows, hists = [], []
    for n in parse_range(args.n):
        _check_feasible(args.diagram_class, n)
        jobs = [(args.observable, args.diagram_class, n, args.seed, j, lo, hi, vols)
                for j, lo, hi in _blocks(args.count, args.streams)]
        merged, allvals = {}, {}
        for accs, values in _run_streams(_stats_block, jobs, args.streams):
            for key, acc in accs.items():
                merged.setdefault(key, MomentAccumulator()).merge(acc)
                allvals.setdefault(key, []).extend(values[key])
        for key, acc in merged.items():
            s = acc.summary()
            rows.append([key, args.diagram_class, n, s.count] + [
                _fmt(float(x)) for x in (s.mean, s.variance, s.skewness, s.m4, s.m5, s.min, s.max)])
            if bins:
                edges, dens = normalized_histogram(allvals[key], bins)
                for b in range(len(dens)):
                    hists.append([key, args.diagram_class, n, b, _fmt(float(edges[b])),
                                  _fmt(float(edges[b + 1])), _fmt(float(dens[b]))])
    with _Output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["observable", "class", "n", "count", "mean", "variance", "skewness",
                    "m4", "m5", "min", "max"])
        w.writerows(rows)
    if bins:
        hist_path = args.out + ".hist.csv" if args.out and args.out != "-" else None
        with _Output(hist_path) as fh:
            w = _csv_writer(fh)
            w.writerow(["observable", "class", "n", "bin", "left", "right", "density"])
            w.writerows(hists)
    return 0


# ---------------------------------------------------------------- embed

def load_tangle(source):
    """A tangle from a JSON file or a builtin name (``builtin:square`` etc.)."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name == "square":
            return name, tg.minimal_square(1)
        if name == "edge":
            return name, tg.single_edge().with_bits(())
        if name == "figure10":
            return name, tg.figure10_example()
        lib = tg.forbidden_tangle_library()
        if name not in lib:
            raise ValueError(f"unknown builtin tangle {name!r}")
        return name, lib[name]
    with open(source) as fh:
        return source, tg.from_json(fh.read())


def _embed_block(job):
    source, N, with_crossings, seed, stream_id, lo, hi = job
    _, t = load_tangle(source)
    s = RandomStream(seed, stream_id)
    hits = 0
    for _ in range(lo, hi):
        if with_crossings:
            l = assign_crossings(sample_four_valent(N, s), "uniform", s)
            hits += tg.embeds_with_crossings(t, l)
        else:
            hits += tg.embeds_at_root(t, sample_quadrangulation(N, s))
    return hits


def _rooting_block(job):
    source, c, seed, stream_id, lo, hi = job
    _, t = load_tangle(source)
    s = RandomStream(seed, stream_id)
    acc = MomentAccumulator()
    for _ in range(lo, hi):
        l = assign_crossings(sample_four_valent(c, s), "uniform", s)
        acc.add(tg.rooting_count(t, l) / c)
    return acc


def cmd_embed(args):
    name, t = load_tangle(args.tangle)
    v = tg.first_violation(t)
    if v is not None:
        _warn(f"lint: tangle {name} violates {v}")
        return 2
    n, p = t.area, t.p
    with _Output(args.out) as fh:
        w = _csv_writer(fh)
        if args.rooting:
            c = args.c
            if t.crossing_bits is None:
                t = t.with_bits((0,) * n)
            jobs = [(args.tangle, c, args.seed, j, lo, hi)
                    for j, lo, hi in _blocks(args.samples, args.streams)]
            acc = MomentAccumulator()
            for a in _run_streams(_rooting_block, jobs, args.streams):
                acc.merge(a)
            s = acc.summary()
            exact = census.expected_rooting_count(n, p, c) / c
            limit = census.expected_rooting_count_limit(n, p)
            z = (s.mean - exact) / s.sem() if s.count > 1 and s.variance > 0 else float("nan")
            w.writerow(["tangle_id", "n", "p", "c", "samples", "mean_normalized", "sem",
                        "exact", "limit", "z_score"])
            w.writerow([name, n, p, c, s.count, _fmt(s.mean), _fmt(s.sem()), _fmt(exact),
                        _fmt(limit), _fmt(z)])
        else:
            N = args.N
            jobs = [(args.tangle, N, args.with_crossings, args.seed, j, lo, hi)
                    for j, lo, hi in _blocks(args.samples, args.streams)]
            hits = sum(_run_streams(_embed_block, jobs, args.streams))
            prob = float(census.tangle_prob(n, p, N))
            if args.with_crossings:
                prob = census.diagram_prob_with_crossings(n, p, N)
            freq = hits / args.samples
            sd = math.sqrt(prob * (1 - prob) / args.samples)
            z = (freq - prob) / sd if sd > 0 else float("nan")
            w.writerow(["tangle_id", "n", "p", "N_or_c", "samples", "hits", "frequency",
                        "exact_prob", "z_score"])
            w.writerow([name, n, p, N, args.samples, hits, _fmt(freq), _fmt(prob), _fmt(z)])
    return 0


# ---------------------------------------------------------------- join / export

def read_diagrams(path):
    """JSON-lines diagrams (with ids) or ``id<TAB>PD[...]`` lines."""
    out = []
    with open(path) as fh:
        for k, line in enumerate(fh):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("{"):
                doc = json.loads(line)
                out.append((doc.get("id", str(k)), dg.from_json(doc)))
            else:
                did, _, pd = line.rpartition("\t")
                out.append((did or str(k), dg.parse_pd(pd)))
    return out


def join_volumes(diagrams, vols, sort_facetype=False):
    rows, violations = [], []
    unmatched = [did for did, _ in diagrams if did not in vols]
    for did, d in diagrams:
        if did not in vols:
            continue
        vol = vols[did]
        ft = dg.face_type(d)
        kind = dg.classify(d)
        twist = lo = hi = ""
        ok = ""
        if kind != dg.GENERAL:
            twist = dg.twist_number(d)
            b = dg.volume_bounds(d)
            lo, hi = b.lower, b.upper
            ok = b.contains(vol)
            if not ok:
                violations.append(did)
        rows.append((ft.sort_key(), did, d.n_crossings, ft.as_list(2, 3 * d.n_crossings), vol,
                     twist, lo, hi, ok))
    if sort_facetype:
        rows.sort(key=lambda r: (r[0], r[1]))
    return rows, violations, unmatched


def cmd_join_volumes(args):
    diagrams = read_diagrams(args.manifest)
    vols = _load_volumes(args.volumes)
    if not vols:
        _warn(f"no volumes in {args.volumes}; nothing joined")
    rows, violations, unmatched = join_volumes(diagrams, vols, args.sort == "facetype")
    with _Output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["diagram_id", "n", "face_type", "volume", "twist", "lower_bound",
                    "upper_bound", "within_bounds"])
        for _, did, n, ft, vol, twist, lo, hi, ok in rows:
            w.writerow([did, n, ";".join(map(str, ft)), _fmt(vol), twist, _fmt(lo), _fmt(hi),
                        "" if ok == "" else int(ok)])
    if unmatched and vols:
        _warn(f"{len(unmatched)} diagram(s) without a volume")
    if violations:
        _warn(f"{len(violations)} record(s) outside their volume bounds: "
              + ", ".join(violations[:10]))
    return 0


def cmd_export(args):
    rows = read_diagrams(args.input)
    fmt = args.format or "pd"
    with _Output(args.out) as fh:
        _write_diagrams(fh, rows, fmt)
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    common.add_argument("--streams", type=int, default=1, help="independent random streams")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv", "pd"), default=None)

    p = argparse.ArgumentParser(prog="linklab", parents=[common],
                                description="Random link diagrams: sampling, census, statistics.")
    sub = p.add_subparsers(dest="command", required=True)
    sd = argparse.SUPPRESS

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        # the global flags are also accepted after the subcommand
        sp.add_argument("--seed", type=int, default=sd)
        sp.add_argument("--streams", type=int, default=sd)
        sp.add_argument("--out", default=sd)
        sp.add_argument("--format", choices=("json", "csv", "pd"), default=sd)
        return sp

    s = add("sample", help="sample diagrams")
    s.add_argument("--class", dest="diagram_class", choices=CLASSES, default="alternating")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--manifest", default=None, help="manifest path when writing to stdout")
    s.set_defaults(func=cmd_sample)

    c = add("census", help="exact counts and probabilities")
    c.add_argument("--formula", choices=FORMULAS, default="sq")
    c.add_argument("--n")
    c.add_argument("--m")
    c.add_argument("--p")
    c.add_argument("--N")
    c.add_argument("--table-4m-p", nargs="*", default=None, metavar="KEY=RANGE",
                   help="(4/m) P(n, m) table, e.g. --table-4m-p n=1000 m=2..7")
    c.set_defaults(func=cmd_census)

    st = add("stats", help="moment summaries of diagram observables")
    st.add_argument("--observable", choices=OBSERVABLES, default="bigons")
    st.add_argument("--class", dest="diagram_class", choices=CLASSES, default="alternating")
    st.add_argument("--n", required=True, help="list or range of sizes, e.g. 8,10 or 6..10")
    st.add_argument("--count", type=int, default=1000)
    st.add_argument("--volumes", default=None, help="CSV with diagram_id,volume")
    st.add_argument("--emit-hist", default=None, metavar="bins=K")
    st.set_defaults(func=cmd_stats)

    e = add("embed", help="tangle embedding frequency or rooting counts")
    e.add_argument("--tangle", required=True, help="tangle JSON file or builtin:<name>")
    e.add_argument("--N", type=int, default=50)
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--with-crossings", action="store_true")
    e.add_argument("--rooting", action="store_true", help="normalized rooting-count mode")
    e.add_argument("--c", type=int, default=200)
    e.set_defaults(func=cmd_embed)

    j = add("join-volumes", help="join externally computed volumes onto sampled diagrams")
    j.add_argument("--manifest", required=True, help="diagram file written by `sample`")
    j.add_argument("--volumes", required=True, help="CSV with diagram_id,volume")
    j.add_argument("--sort", choices=("none", "facetype"), default="none")
    j.set_defaults(func=cmd_join_volumes)

    x = add("export", help="convert a diagram file to PD, JSON or statistics CSV")
    x.add_argument("--in", dest="input", required=True)
    x.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LinkLabError, ValueError) as e:
        if isinstance(e, TangleValidationError):
            _warn(f"lint: {e.violation}")
        else:
            _warn(f"error: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
