from tsf.datapipe.types import WindowSet
from tsf.handlers.common import open_store, resolve_config
from tsf.loader import dp
from tsf.model_train.cross_validation import k_fold_cv, loso_cv
from tsf.model_train.reports import confusion_frame, cv_summary, fold_record


def arguments(parser):
    parser.add_argument("--windows", required=True, help="windows archive with subject ids")
    parser.add_argument("--runs", type=int, default=None, help="repetitions with consecutive seeds")
    parser.add_argument("--kfold", type=int, default=None, metavar="K",
                        help="k-fold over subjects instead of leave-one-subject-out")


@dp.command_handler("loso", help="Leave-one-subject-out (or k-fold) cross-validation", arguments=arguments)
def cross_validate(options: dict) -> str:
    windows = WindowSet.load(options["windows"])
    cfg = resolve_config(options, windows)
    if options["runs"] is not None:
        cfg = cfg.replace(runs=options["runs"])
    store = open_store(options)

    def on_fold(run, result):
        name = f"folds/run-{run}-{result.fold_id}"
        store.write_json(f"{name}.json", fold_record(result, run))
        store.write_table(f"{name}-confusion.csv", confusion_frame(result), index=True)

    if options["kfold"]:
        report = k_fold_cv(windows, cfg, options["kfold"], on_fold=on_fold)
    else:
        report = loso_cv(windows, cfg, on_fold=on_fold)
    summary = cv_summary(report)
    store.write_json("cv_summary.json", summary)
    return (f"{summary['protocol']}: macro F1 {summary['macro_f1_mean']:.4f} ± {summary['macro_f1_std']:.4f}, "
            f"weighted F1 {summary['weighted_f1_mean']:.4f} ± {summary['weighted_f1_std']:.4f}")
