from .memory import rss_mb, log_memory_usage
from .output import dump_json, write_output
