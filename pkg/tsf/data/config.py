from environs import Env

# environs reads process settings from the environment and an optional .env file
env = Env()
env.read_env()

LOG_LEVEL = env.log_level("TSF_LOG_LEVEL", default="INFO")  # root logger level
OUT_DIR = env.path("TSF_OUT_DIR", default="runs")  # default --out-dir of the CLI
SEED = env.int("TSF_SEED", default=0)  # default --seed of the CLI
SLOW_TESTS = env.bool("TSF_SLOW_TESTS", default=False)  # run the desk-scale experiments
