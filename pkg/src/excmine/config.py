import os


EXCMINE_SEED = int(os.getenv("EXCMINE_SEED", "13"))

EXCMINE_LOG_LEVEL = os.getenv("EXCMINE_LOG_LEVEL", "INFO")

# model files written by this version
MODEL_FORMAT_VERSION = "excm-1"

# 0.7 / 0.1 / 0.2, see splits.split_dataset
DEFAULT_SPLIT_RATIOS = (0.7, 0.1, 0.2)
