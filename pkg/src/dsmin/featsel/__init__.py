"""Feature selection by mutual information with feature costs."""

from .data import Dataset, load_adult, load_dataset, load_mushroom, load_named, one_hot
from .entropy import EntropyModel, conditional_entropy, joint_entropy
from .experiment import run_experiment, write_csv
from .nb import train_eval_nb
from .objective import greedy_select, mi_objective
