"""tanhspec - 命令行入口"""
import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

# 确保项目根目录在Python路径中
_current_dir = Path(__file__).parent.parent
if str(_current_dir) not in sys.path:
    sys.path.insert(0, str(_current_dir))

from loguru import logger

# 导入配置之前先把默认输出收窄到 stderr + 配置的级别，避免调试信息混入表格输出
logger.remove()
try:
    _stderr_sink = logger.add(sys.stderr, level=os.getenv("TANHSPEC_LOG_LEVEL", "WARNING").upper())
except ValueError:
    # 级别名无效，setup_logging 会报告
    _stderr_sink = logger.add(sys.stderr, level="WARNING")

from src import __version__
from src.core.errors import DomainError, InputError, NumericalError, TanhSpecError, UsageError
from src.integrations.tables import write_table
from src.services import commands
from src.services.functions import FunctionSpec
from src.utils.config import LOG_LEVELS, Config, config

COMMANDS = ("expand", "eval", "diff", "ft", "solve", "basis")
EXIT_OK, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 2, 3

_file_sink: Optional[int] = None


class _Parser(argparse.ArgumentParser):
    """用法错误抛异常而不是直接退出，由 main 统一输出单行错误"""

    def error(self, message):
        raise UsageError(message)


def setup_logging(cfg: Config) -> None:
    """stderr + 滚动日志文件"""
    global _stderr_sink, _file_sink
    level = cfg.log_level
    if level not in LOG_LEVELS:
        raise InputError(f"unsupported log level {level!r}, expected one of {', '.join(LOG_LEVELS)}")
    try:
        logger.remove(_stderr_sink)
    except ValueError:
        pass
    _stderr_sink = logger.add(sys.stderr, level=level)
    if _file_sink is not None:
        try:
            logger.remove(_file_sink)
        except ValueError:
            pass
        _file_sink = None
    if cfg.log_to_file:
        logs_dir = cfg.log_dir
        try:
            logs_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise InputError(f"cannot create log directory {logs_dir}: {e.strerror or e}")
        _file_sink = logger.add(
            str(logs_dir / "tanhspec_{time}.log"),
            rotation="10 MB",
            retention="7 days",
            encoding="utf-8",
            enqueue=True,
            level="DEBUG",
        )


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float, help="Jacobi 参数 alpha (> -1)")
    common.add_argument("--beta", type=float, help="Jacobi 参数 beta (> -1)")
    common.add_argument("--mode", choices=("full", "half"), help="全区间或半区间基")
    common.add_argument("--n", type=int, help="系数个数 N")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), help="输出格式")
    common.add_argument("--out", type=Path, help="输出文件（默认标准输出）")
    common.add_argument("--in", dest="input", type=Path, help="输入系数表")
    common.add_argument("--points", help="采样点：a:b:n 或逗号列表")
    common.add_argument("--config", type=Path, help="配置文件路径")

    parser = _Parser(prog="tanhspec", description="tanh-Jacobi 谱方法工具")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(COMMANDS) + "}", parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="计算展开系数")
    p.add_argument("--fn", help="内置函数 NAME[:params]")
    p.add_argument("--samples", type=Path, help="(x, value) 采样文件")

    sub.add_parser("eval", parents=[common], help="在采样点上求展开式的值")
    sub.add_parser("diff", parents=[common], help="在采样点上求展开式导数的值")
    sub.add_parser("ft", parents=[common], help="展开式的 Fourier 变换")

    p = sub.add_parser("solve", parents=[common], help="求解 u' + a(x) u = f")
    p.add_argument("--a", dest="a_fn", help="乘子 a(x)：NAME[:params]")
    p.add_argument("--a-samples", type=Path, help="乘子的采样文件")
    p.add_argument("--fn", help="右端项 f：NAME[:params]")
    p.add_argument("--samples", type=Path, help="右端项的采样文件")
    p.add_argument("--bandwidth", type=int, help="乘子带宽 M")
    p.add_argument("--values-out", type=Path, help="写出 u(x) 采样值的文件")

    p = sub.add_parser("basis", parents=[common], help="输出基函数取值（绘图数据）")
    p.add_argument("--m-list", help="基函数下标，逗号分隔")
    return parser


def _function(name: Optional[str], samples: Optional[Path], what: str) -> FunctionSpec:
    if name and samples:
        raise UsageError(f"give either a builtin or a samples file for {what}, not both")
    if samples:
        return FunctionSpec.from_file(samples)
    if name:
        return FunctionSpec.parse(name)
    raise UsageError(f"missing {what}")


def _run_config(args: argparse.Namespace, cfg: Config) -> commands.RunConfig:
    def pick(value, default):
        return default if value is None else value

    points_default = cfg.default_xi_points if args.command == "ft" else cfg.default_points
    return commands.RunConfig(
        alpha=pick(args.alpha, cfg.default_alpha),
        beta=pick(args.beta, cfg.default_beta),
        mode=pick(args.mode, cfg.default_mode),
        n=pick(args.n, cfg.default_n),
        output=args.out,
        fmt=pick(args.fmt, cfg.default_format if args.out is None else None),
        points=pick(args.points, points_default),
        input=args.input,
        bandwidth=pick(getattr(args, "bandwidth", None), cfg.solve_bandwidth),
        m_list=pick(getattr(args, "m_list", None), cfg.default_m_list),
        values_out=getattr(args, "values_out", None),
        rank_tolerance=cfg.rank_tolerance,
        residual_tolerance=cfg.residual_tolerance,
        xi_max=cfg.xi_max,
    )


def dispatch(args: argparse.Namespace, run: commands.RunConfig) -> commands.CommandResult:
    if args.command == "expand":
        return commands.cmd_expand(run, _function(args.fn, args.samples, "--fn"))
    if args.command == "eval":
        return commands.cmd_eval(run)
    if args.command == "diff":
        return commands.cmd_diff(run)
    if args.command == "ft":
        return commands.cmd_ft(run)
    if args.command == "solve":
        a_fn = _function(args.a_fn, args.a_samples, "--a")
        f_fn = _function(args.fn, args.samples, "--fn")
        return commands.cmd_solve(run, a_fn, f_fn)
    return commands.cmd_basis(run)


def _fail(kind: str, message: str, code: int) -> int:
    line = " ".join(str(message).split())
    sys.stderr.write(f"error[{kind}]: {line}\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
        cfg = Config(args.config) if args.config else config
        setup_logging(cfg)
        if not cfg.validate():
            logger.warning("配置验证失败，使用命令行参数与内置默认值")
        logger.debug(f"命令 {args.command}: {vars(args)}")
        run = _run_config(args, cfg)
        result = dispatch(args, run)
        write_table(result.table, run.output, run.fmt, stream=sys.stdout)
        for message in result.messages:
            sys.stderr.write(message + "\n")
        return EXIT_OK
    except (UsageError, InputError) as e:
        return _fail(e.kind, str(e), EXIT_DOMAIN)
    except DomainError as e:
        logger.debug(f"定义域错误: {e}")
        return _fail("domain", str(e), EXIT_DOMAIN)
    except NumericalError as e:
        logger.error(f"数值失败: {e}")
        return _fail("numerical", str(e), EXIT_NUMERICAL)
    except TanhSpecError as e:
        return _fail("error", str(e), EXIT_NUMERICAL)


if __name__ == "__main__":
    sys.exit(main())
