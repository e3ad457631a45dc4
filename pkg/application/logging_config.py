import logging # Import logging to configure the root logger shared by the engine, API and CLI
from rich.logging import RichHandler # Import RichHandler for readable, colored log lines on stderr
from rich.console import Console # Import Console so log output never mixes with stdout artifacts

LOG_FORMAT = "%(name)s: %(message)s"


# Function to set up logging once for the whole process
def configure_logging(level="INFO"):
    root = logging.getLogger()

    # Replace a handler installed by an earlier call instead of stacking a second one
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)

    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(str(level).upper())
    return root
