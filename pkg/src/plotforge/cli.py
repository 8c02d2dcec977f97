"""Command line: render / validate / serve.

Exit codes: 0 success, 2 invalid spec (message names the offending path),
3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .eps import export_eps
from .errors import PlotforgeError, SpecError
from .pipeline import emit_drawlist, render_scene
from .png import encode_png
from .specdoc import load_spec

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="render a spec file to PNG or EPS")
    render.add_argument("spec")
    render.add_argument("--out", required=True)
    render.add_argument("--width", type=int, default=800)
    render.add_argument("--height", type=int, default=600)
    render.add_argument("--format", choices=("png", "eps"), default=None,
                        help="default: by --out extension, else png")

    validate = sub.add_parser("validate", help="check a spec file, render nothing")
    validate.add_argument("spec")

    serve = sub.add_parser("serve", help="serve the viewer protocol for a spec")
    serve.add_argument("spec")
    serve.add_argument("--port", type=int, default=0, help="0 picks a free port")
    serve.add_argument("--bind", default="127.0.0.1")
    return parser


def _load(path: str):
    """-> (scene, exit_code); scene is None on failure, message already printed."""
    try:
        return load_spec(path), EXIT_OK
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_IO if exc.code == "IO_FAILURE" else EXIT_SPEC


def cmd_render(args) -> int:
    scene, code = _load(args.spec)
    if scene is None:
        return code
    fmt = args.format or ("eps" if Path(args.out).suffix.lower() == ".eps" else "png")
    try:
        if fmt == "png":
            raster, _ = render_scene(scene, args.width, args.height)
            Path(args.out).write_bytes(encode_png(raster))
        else:
            prims = emit_drawlist(scene, args.width, args.height)
            Path(args.out).write_text(export_eps(prims, args.width, args.height))
    except PlotforgeError as exc:  # e.g. canvas too small for this scene
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_validate(args) -> int:
    scene, code = _load(args.spec)
    if scene is None:
        return code
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import ViewerServer

    scene, code = _load(args.spec)
    if scene is None:
        return code
    try:
        server = ViewerServer(scene, host=args.bind, port=args.port)
    except OSError as exc:
        print(f"error: cannot bind {args.bind}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"LISTENING {server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "render":
        return cmd_render(args)
    if args.command == "validate":
        return cmd_validate(args)
    return cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
