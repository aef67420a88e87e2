# encoding:utf-8
"""
stabmod 主入口
命令行：ring / xi / approx / verify / membership / census / index / serve
serve 启动 Flask 应用，提供同样计算的 JSON 接口
"""

import argparse
import json
import logging
import signal
import sys
from typing import List, Optional

from flask import Flask, jsonify, request

from bridge.report import ExitCode, Report, ReportType
from common.errors import EngineError, ParseError
from common.logger import logger, setup_logger
from common.workspace import declared_ring, get_workspace, module_from_dict, reset_workspace
from config import get_config, load_config, set_config

__version__ = "0.1.0"

# 未指定 --ring 时使用的环
DEFAULT_RING = "A"

# 创建Flask应用
app = Flask(__name__)


# ---------- 命令 ----------


def cmd_ring(args) -> Report:
    """ring check|info：校验环并报告 dim、socle、Gorenstein、Loewy 长度"""
    ring = get_workspace().ring(args.ring_name or args.ring or DEFAULT_RING)
    info = ring.info()
    if args.action == "check":
        info = {"ok": True, **info}
    lines = [f"ring {info['name']} over F_{info['p']}"]
    lines += [f"  {k}: {v}" for k, v in info.items() if k not in ("name", "p")]
    return Report(ReportType.JSON, info, "\n".join(lines))


def _ring_and_module(args):
    ws = get_workspace()
    if args.ring:
        ring = ws.ring(args.ring)
    else:
        ring = ws.module_file_ring(args.module) or ws.ring(DEFAULT_RING)
    return ring, ws.module(args.module, ring)


def cmd_xi(args) -> Report:
    from invariants.xi import xi_n, xi_sequence

    _, module = _ring_and_module(args)
    if args.seq:
        report = xi_sequence(module, args.max, args.width, args.method, seed=get_config().get("seed"))
        return Report(ReportType.JSON, report.to_dict(), report.table())
    if args.n is None:
        raise ParseError("xi needs --n N or --seq --max N")
    value = xi_n(module, args.n, args.method)
    payload = {"module": module.name, "n": args.n, "xi": value, "mu": module.mu, "seed": get_config().get("seed")}
    return Report(ReportType.JSON, payload, f"xi({args.n}, {module.name}) = {value}  (mu={module.mu})")


def cmd_approx(args) -> Report:
    from approx.construct import ab_approximation, fpd_hull, is_minimal_approximation, origin_extension
    from approx.sequences import SeqKind, seq_to_json, verify_ses
    from invariants.xi import xi_n

    _, module = _ring_and_module(args)
    if args.kind == "ab":
        seq = ab_approximation(module, args.n, minimize=args.minimize)
    elif args.kind == "origin":
        seq = origin_extension(module, args.n)
    else:
        seq = fpd_hull(module, args.n, minimize=args.minimize)
    check = verify_ses(seq)
    seed = get_config().get("seed")
    payload = {
        "sequence": seq_to_json(seq),
        "verification": check.to_dict(),
        "summary": seq.summary(),
        "seed": seed,
    }
    lines = [repr(seq), f"dims {seq.summary()['dims']}, mu {seq.summary()['mu']}", f"seed: {seed}"]
    if seq.kind != SeqKind.ORIGIN:
        payload["minimal"] = is_minimal_approximation(seq)
        lines.append(f"minimal: {payload['minimal']}")
    if seq.kind == SeqKind.HULL:
        diff = seq.mid.mu - seq.right.mu
        payload["mu_difference"] = diff
        payload["xi"] = xi_n(module, args.n)
        lines.append(f"mu(Y) - mu(X) = {diff}, xi({args.n}) = {payload['xi']}")
    lines.append("verification: " + ("pass" if check.ok else f"FAIL {check.failures()}"))
    code = ExitCode.OK if check.ok else ExitCode.FAILURE
    return Report(ReportType.JSON, payload, "\n".join(lines), code)


def cmd_verify(args) -> Report:
    from approx.sequences import seq_from_json, verify_ses

    try:
        with open(args.file, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read sequence file {args.file}: {e}")
    seq = seq_from_json(data.get("sequence", data))
    check = verify_ses(seq)
    lines = [repr(seq)] + [f"  {'ok ' if c.ok else 'BAD'} {c.name} {c.detail}" for c in check.clauses]
    return Report(ReportType.JSON, check.to_dict(), "\n".join(lines), ExitCode.OK if check.ok else ExitCode.FAILURE)


def cmd_membership(args) -> Report:
    from approx.construct import membership

    _, module = _ring_and_module(args)
    report = membership(module, args.n)
    text = f"{module.name}, n={args.n}: A={report.in_A} E={report.in_E} H={report.in_H}"
    if report.witnesses:
        text += "\n" + "\n".join(f"  not in {k}: {v}" for k, v in report.witnesses.items())
    return Report(ReportType.JSON, dict(report.to_dict(), seed=get_config().get("seed")), text)


def cmd_census(args) -> Report:
    from invariants.census import run_census

    ring = get_workspace().ring(args.ring or DEFAULT_RING)
    report = run_census(ring, args.count, args.dim_max, get_config().get("seed"), args.workers, args.max)
    return Report(ReportType.JSON, report.to_dict(), report.table())


def cmd_index(args) -> Report:
    from invariants.xi import index_report

    ring = get_workspace().ring(args.ring or DEFAULT_RING)
    report = index_report(ring, get_config().get("seed"))
    text = f"index({ring.name}) = {report.index}  ({report.variant} values for n = 1..: {report.values})"
    return Report(ReportType.JSON, report.to_dict(), text)


def cmd_serve(args) -> Report:
    from werkzeug.serving import run_simple

    config = get_config()
    host = args.host or config.get("host", "127.0.0.1")
    port = int(args.port or config.get("port", 8080))
    debug = bool(config.get("debug", False))
    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)
    logger.info(f"[App] Serving on http://{host}:{port} (debug={debug})")
    run_simple(host, port, app, use_reloader=debug, use_debugger=debug)
    return Report(ReportType.INFO, None, "server stopped")


# ---------- 参数 ----------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default=None, help="builtin ring name or ring JSON path (default A)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--p", type=int, default=None, help="prime modulus for builtin rings")
    common.add_argument("--json", default=None, help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--config", default="config.json")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="stabmod", description="exact stable module computations")
    parser.add_argument("--version", action="version", version=f"stabmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring", parents=[common], help="validate or describe a ring")
    p.add_argument("action", choices=["check", "info"])
    p.add_argument("ring_name", nargs="?", default=None)
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("xi", parents=[common], help="approximated xi-invariants")
    p.add_argument("--module", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seq", action="store_true")
    p.add_argument("--max", type=int, default=None)
    p.add_argument("--width", type=int, default=None, help="plateau width W")
    p.add_argument("--method", choices=["syzygy", "counit"], default=None)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("approx", parents=[common], help="AB approximation, origin extension, FPD hull")
    p.add_argument("kind", choices=["ab", "origin", "hull"])
    p.add_argument("--module", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", parents=[common], help="verify a sequence JSON file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("membership", parents=[common], help="membership in A_n, E_n, H_n")
    p.add_argument("--module", required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("census", parents=[common], help="xi profiles of seeded random modules")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--dim-max", type=int, default=None)
    p.add_argument("--max", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("index", parents=[common], help="index of the ring")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("serve", parents=[common], help="start the JSON HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def _emit(report: Report, target: Optional[str]):
    if target == "-":
        print(report.to_json())
        return
    if report.text:
        print(report.text)
    if target and report.payload is not None:
        with open(target, "w", encoding="utf-8") as f:
            f.write(report.to_json())
        logger.info(f"[App] JSON report written to {target}")


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)

    config = load_config(args.config)
    config = config.copy_with(p=args.p, seed=args.seed, log_level=args.log_level)
    set_config(config)
    # 设置日志级别
    level = getattr(logging, str(config.get("log_level")).upper(), logging.WARNING)
    if config.get("debug"):
        level = logging.DEBUG
    setup_logger(level=level, log_file=config.get("log_file") or None)
    reset_workspace(config)

    try:
        report = args.func(args)
    except EngineError as e:
        logger.error(f"[App] {args.command} failed: {e}")
        report = Report.from_error(e)
        print(f"error: {e}", file=sys.stderr)
        if args.json:
            _emit(Report(ReportType.ERROR, report.payload), args.json)
        return report.exit_code
    except Exception as e:
        logger.exception(f"[App] Unexpected error in {args.command}: {e}")
        return int(ExitCode.FAILURE)
    _emit(report, args.json)
    return report.exit_code


# ---------- HTTP 接口 ----------


def _error_response(e: EngineError):
    report = Report.from_error(e)
    return jsonify({"code": report.exit_code, "msg": str(e)}), report.http_status()


def _request_module(body: dict):
    ws = get_workspace()
    source = body.get("module", "k")
    if "ring" in body:
        ring = ws.ring(str(body["ring"]))
    elif isinstance(source, dict):
        ring = declared_ring(source) or ws.ring(DEFAULT_RING)
    else:
        ring = ws.ring(DEFAULT_RING)
    if isinstance(source, dict):
        return ring, module_from_dict(source, ring, source.get("name", "inline"))
    return ring, ws.module(str(source), ring)


@app.route("/", methods=["GET"])
def index():
    """服务信息"""
    return jsonify({"status": "ok", "service": "stabmod", "version": __version__})


@app.route("/health", methods=["GET"])
def health():
    """健康检查"""
    return jsonify({"status": "healthy"})


@app.route("/ring/<name>", methods=["GET"])
def ring_info(name: str):
    try:
        p = request.args.get("p", type=int)
        return jsonify(get_workspace().ring(name, p).info())
    except EngineError as e:
        return _error_response(e)


@app.route("/xi", methods=["POST"])
def xi_endpoint():
    """{"ring", "module", "n_max"} → ξ 序列报告"""
    from invariants.xi import xi_sequence

    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        return jsonify({"code": int(ExitCode.PARSE), "msg": "Invalid JSON"}), 400
    try:
        _, module = _request_module(body)
        n_max = body.get("n_max")
        report = xi_sequence(module, None if n_max is None else int(n_max))
        return jsonify(report.to_dict())
    except EngineError as e:
        logger.error(f"[App] /xi failed: {e}")
        return _error_response(e)
    except Exception as e:
        logger.exception(f"[App] /xi error: {e}")
        return jsonify({"code": 500, "msg": "Internal Server Error"}), 500


@app.route("/membership", methods=["POST"])
def membership_endpoint():
    """{"ring", "module", "n"} → A_n / E_n / H_n 标记"""
    from approx.construct import membership

    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        return jsonify({"code": int(ExitCode.PARSE), "msg": "Invalid JSON"}), 400
    try:
        _, module = _request_module(body)
        return jsonify(membership(module, int(body.get("n", 1))).to_dict())
    except EngineError as e:
        logger.error(f"[App] /membership failed: {e}")
        return _error_response(e)
    except Exception as e:
        logger.exception(f"[App] /membership error: {e}")
        return jsonify({"code": 500, "msg": "Internal Server Error"}), 500


def signal_handler(sig, frame):
    """信号处理函数"""
    logger.info("[App] Received signal, shutting down...")
    sys.exit(0)


if __name__ == "__main__":
    sys.exit(main())
