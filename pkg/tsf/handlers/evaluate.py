from tsf.datapipe.types import WindowSet
from tsf.handlers.common import open_store
from tsf.loader import dp
from tsf.model_train.reports import confusion_frame, fold_record
from tsf.model_train.trainer import evaluate
from tsf.utils.storage import load_model


def arguments(parser):
    parser.add_argument("--model", required=True, help="model archive written by train")
    parser.add_argument("--windows", required=True, help="test windows archive")


@dp.command_handler("eval", help="Score a trained model on a windows archive", arguments=arguments)
def evaluate_model(options: dict) -> str:
    model = load_model(options["model"])
    result = evaluate(model, WindowSet.load(options["windows"]), fold_id="eval")

    store = open_store(options)
    store.write_json("eval_report.json", fold_record(result))
    store.write_table("confusion.csv", confusion_frame(result), index=True)
    return f"macro F1 {result.macro_f1:.4f}, weighted F1 {result.weighted_f1:.4f}, {result.flops:.3g} FLOPs"
