from .tensor import Tensor, backward, no_grad
from .modules import AdamState, Conv1d, LayerNorm, Linear, Module, Parameter, he_normal
from .optim import Adam, adam_step
from . import functional
