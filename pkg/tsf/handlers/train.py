from tsf.datapipe.types import WindowSet
from tsf.handlers.common import open_store, resolve_config
from tsf.loader import dp
from tsf.model_train.reports import confusion_frame, fold_record
from tsf.model_train.trainer import DataSplits, train


def arguments(parser):
    parser.add_argument("--windows", required=True, help="training windows archive")
    parser.add_argument("--test", default=None, help="optional held-out windows archive to score")


@dp.command_handler("train", help="Train a model (requires --config)", arguments=arguments, config_required=True)
def train_model(options: dict) -> str:
    windows = WindowSet.load(options["windows"])
    test = WindowSet.load(options["test"]) if options["test"] else None
    cfg = resolve_config(options, windows)
    model, result = train(DataSplits(windows, None, test), cfg, fold_id="train")

    store = open_store(options)
    store.save_model(model)
    store.write_json("fold_report.json", fold_record(result))
    store.write_table("confusion.csv", confusion_frame(result), index=True)
    return f"best epoch {result.best_epoch + 1}, macro F1 {result.macro_f1:.4f}, weighted F1 {result.weighted_f1:.4f}"
