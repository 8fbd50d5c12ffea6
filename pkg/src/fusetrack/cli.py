"""Command-line client for the tracking service.

Every subcommand talks to the HTTP API. By default an in-process application
instance serves the request (no network, fully deterministic); pass
--server URL to target a running instance instead. Exit codes: 0 success,
1 usage error, 2 data or service error.
"""

from __future__ import annotations

import argparse
import base64
import json
import sys
import warnings
from pathlib import Path

import httpx

from . import __version__
from .errors import FusetrackError
from .sequences import discover

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
    with warnings.catch_warnings():
        # some starlette builds deprecation-warn at import; not actionable here
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app
    return TestClient(create_app())


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise FusetrackError(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _b64_file(path: Path) -> str:
    return base64.b64encode(path.read_bytes()).decode("ascii")


def cmd_track(args) -> int:
    frame_paths, gt_path = discover(args.seq)
    payload = {
        "frames_b64": [_b64_file(p) for p in frame_paths],
        "groundtruth_text": gt_path.read_text(encoding="utf-8"),
    }
    if args.config:
        payload["config_text"] = Path(args.config).read_text(encoding="utf-8")
    if args.cn_table:
        payload["cn_table_b64"] = _b64_file(Path(args.cn_table))
    if args.features:
        payload["features"] = args.features
    with _client(args.server) as client:
        data = _post(client, "/track", payload)
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(data["results_text"], encoding="utf-8")
    meta = {
        "fps": data["fps"],
        "frames": data["frame_count"],
        "updates": int(sum(data["updated"])),
    }
    Path(str(out) + ".meta.json").write_text(json.dumps(meta, sort_keys=True) + "\n",
                                             encoding="utf-8")
    print(f"tracked {data['frame_count']} frames at {data['fps']:.2f} fps -> {out}")
    return 0


def cmd_eval(args) -> int:
    results_path = Path(args.results)
    payload = {
        "results_text": results_path.read_text(encoding="utf-8"),
        "groundtruth_text": Path(args.gt).read_text(encoding="utf-8"),
    }
    meta_path = Path(args.meta) if args.meta else Path(str(results_path) + ".meta.json")
    if meta_path.is_file():
        try:
            payload["fps"] = float(json.loads(meta_path.read_text(encoding="utf-8"))["fps"])
        except (ValueError, KeyError):
            raise FusetrackError(f"bad meta file {meta_path}") from None
    with _client(args.server) as client:
        data = _post(client, "/eval", payload)
    prefix = Path(args.out)
    if prefix.parent != Path(""):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{prefix}_precision.csv").write_text(data["precision_csv"], encoding="utf-8")
    Path(f"{prefix}_success.csv").write_text(data["success_csv"], encoding="utf-8")
    Path(f"{prefix}_summary.txt").write_text(data["summary"] + "\n", encoding="utf-8")
    print(data["summary"])
    return 0


def cmd_synth(args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FusetrackError(f"bad spec file {args.spec}: {e}") from None
    payload: dict = {"spec": spec}
    if args.seed is not None:
        payload["seed"] = args.seed
    with _client(args.server) as client:
        data = _post(client, "/synth", payload)
    out = Path(args.out)
    (out / "img").mkdir(parents=True, exist_ok=True)
    for i, blob in enumerate(data["frames_b64"], 1):
        (out / "img" / f"{i:04d}.ppm").write_bytes(base64.b64decode(blob))
    (out / "groundtruth_rect.txt").write_text(data["groundtruth_text"], encoding="utf-8")
    print(f"wrote {data['frame_count']} frames to {out}")
    return 0


def cmd_selftest(args) -> int:
    with _client(args.server) as client:
        data = _post(client, "/selftest", {})
    for check in data["checks"]:
        mark = "ok  " if check["passed"] else "FAIL"
        print(f"{mark} {check['name']}: {check['detail']}")
    if not data["all_passed"]:
        print("selftest failed", file=sys.stderr)
        return DATA_EXIT
    print(f"all {len(data['checks'])} checks passed")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("fusetrack.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="fusetrack", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("track", help="run the tracker over a sequence directory")
    p.add_argument("--seq", required=True, help="sequence dir with img/ and groundtruth_rect.txt")
    p.add_argument("--out", required=True, help="results file to write (x,y,w,h per frame)")
    p.add_argument("--config", help="tracker config file (key = value lines)")
    p.add_argument("--cn-table", help="color-names table file (32768 x 11 values)")
    p.add_argument("--features", help="comma list of features to enable: gray,hog,cn,ch")
    p.add_argument("--server", help="remote service URL (default: in-process)")
    p.set_defaults(fn=cmd_track)

    p = sub.add_parser("eval", help="score a results file against ground truth")
    p.add_argument("--results", required=True, help="tracker results file")
    p.add_argument("--gt", required=True, help="ground-truth file")
    p.add_argument("--out", required=True, help="output prefix for curve CSVs")
    p.add_argument("--meta", help="meta json with fps (default: RESULTS.meta.json if present)")
    p.add_argument("--server", help="remote service URL (default: in-process)")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("synth", help="render a synthetic sequence to a directory")
    p.add_argument("--spec", required=True, help="synthetic spec file (json)")
    p.add_argument("--out", required=True, help="output sequence directory")
    p.add_argument("--seed", type=int, help="rng seed override")
    p.add_argument("--server", help="remote service URL (default: in-process)")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("selftest", help="run built-in numerical self-checks")
    p.add_argument("--server", help="remote service URL (default: in-process)")
    p.set_defaults(fn=cmd_selftest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FusetrackError as e:
        print(f"error: {e}", file=sys.stderr)
        return DATA_EXIT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return DATA_EXIT
    except httpx.HTTPError as e:
        print(f"error: cannot reach service: {e}", file=sys.stderr)
        return DATA_EXIT


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
