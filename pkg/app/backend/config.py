CONFIG_ENV_LOG_LEVEL = "APP_LOG_LEVEL"
CONFIG_ENV_CONFIG_PATH = "RAAP_CONFIG"

DEFAULT_CONFIG_FILE = "raap.yaml"
DEFAULT_LOG_LEVEL = "INFO"

# Loggers owned by this project; everything else stays at WARNING
PROJECT_LOGGERS = ("raapctl", "datagen", "riskcore", "learners", "simnet", "raap", "pipelinelib")

# Artifact layout below output_dir
DATA_DIR = "data"
MODELS_DIR = "models"
TRACES_DIR = "traces"
REPORTS_DIR = "reports"
FIGURES_DIR = "figures"
SWEEP_DIR = "sweep"

TRAIN_DATASET_FILE = "train.jsonl"
AUDIT_DATASET_FILE = "audit.jsonl"
TRACE_LOG_FILE = "traces.jsonl"
TRUTH_SIDECAR_FILE = "truth.jsonl"
USER_REPORT_FILE = "user_report.json"
OPERATOR_REPORT_FILE = "operator_report.json"
ATTRIBUTION_FILE = "attribution.json"
REPORT_PAGE_FILE = "report.html"
GROUP_FIGURE_FILE = "group_accuracy.svg"
SWEEP_TABLE_FILE = "metrics.csv"
SWEEP_FIGURE_FILE = "summary.svg"

MODEL_FILE_SUFFIX = ".model.json"
TRAINING_LOG_SUFFIX = ".log.jsonl"
