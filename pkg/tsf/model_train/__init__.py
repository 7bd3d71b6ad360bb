from .config import TsfConfig, TsfConfigSchema, config_from_dict, dump_config, load_config
from .network import Diagnostics, ForwardResult, TsfModel, predict, tsf_forward
from .losses import cross_entropy, mixup, one_hot
from .metrics import ClassificationScores, score
from .flops import FlopReport, count_flops, flop_breakdown
from .trainer import DataSplits, EpochRecord, FoldResult, Trainer, evaluate, lr_at, tau_at, train
from .cross_validation import CvReport, k_fold_cv, loso_cv, loso_folds
from .reports import confusion_frame, cv_summary, fold_record
