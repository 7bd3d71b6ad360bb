from tsf.analysis.edges import cmd_edge_histograms
from tsf.analysis.noise import DEFAULT_LEVELS, cmd_noise_study
from tsf.analysis.routes import DEFAULT_CHANNEL, cmd_route_spectra
from tsf.handlers.common import open_store, resolve_seed
from tsf.loader import dp


def model_arguments(parser):
    parser.add_argument("--model", required=True, help="model archive written by train")
    parser.add_argument("--windows", required=True, help="windows archive to analyze")


def noise_arguments(parser):
    model_arguments(parser)
    parser.add_argument("--levels", type=float, nargs="+", default=list(DEFAULT_LEVELS),
                        help="noise std grid in units of the normalized signal")


def edge_arguments(parser):
    model_arguments(parser)
    parser.add_argument("--activity", action="append", default=[], help="class id or name; repeatable")
    parser.add_argument("--bins", type=int, default=20)


def route_arguments(parser):
    model_arguments(parser)
    parser.add_argument("--channel", default=DEFAULT_CHANNEL, help="input channel, e.g. lacc_x or gyro_z")
    parser.add_argument("--imu", type=int, default=0)


def _finish(options: dict, report) -> str:
    open_store(options).write_json(f"{report.kind}.json", report.as_dict())
    return ", ".join(f"{name}: {path}" for name, path in report.tables.items())


@dp.command_handler("analyze-noise", help="WF1 and sensor attention under injected noise", arguments=noise_arguments)
def analyze_noise(options: dict) -> str:
    report = cmd_noise_study(options["model"], options["windows"], options["levels"], options["out_dir"],
                             resolve_seed(options))
    return _finish(options, report)


@dp.command_handler("analyze-edges", help="Histograms of intra- and inter-edge weights", arguments=edge_arguments)
def analyze_edges(options: dict) -> str:
    report = cmd_edge_histograms(options["model"], options["windows"], options["activity"], options["out_dir"],
                                 options["bins"])
    return _finish(options, report)


@dp.command_handler("analyze-routes", help="Input spectra grouped by wavelet route", arguments=route_arguments)
def analyze_routes(options: dict) -> str:
    report = cmd_route_spectra(options["model"], options["windows"], options["out_dir"], options["channel"],
                               options["imu"])
    return _finish(options, report)
