import logging
from functools import wraps

from opentelemetry import trace
from opentelemetry.instrumentation.logging import LoggingInstrumentor
from opentelemetry.sdk.trace import TracerProvider

try:
    trace_provider = TracerProvider()
except Exception as e:
    logging.warning(f"Telemetry initialization failed: {str(e)}. Running without telemetry.")
    trace_provider = None

# loggers that chatter once per enumerated walk or curve
NOISY_LOGGERS = (
    "framedcurves.resources.walks",
    "framedcurves.resources.drawing",
    "framedcurves.resources.crossings",
    "framedcurves.resources.arrangement",
)


class UselessLogFilter(logging.Filter):
    """Drops inner-loop debug chatter unless the root level asks for it."""

    def filter(self, record: logging.LogRecord) -> bool:
        if record.levelno > logging.DEBUG:
            return True
        if not record.name.startswith(NOISY_LOGGERS):
            return True
        return logging.getLogger().getEffectiveLevel() <= logging.DEBUG


def _span_value(value):
    if isinstance(value, (bool, int, float, str)):
        return value
    return repr(value)[:200]


def traceFunction(attributes=None):
    """Run the function inside a span; ``attributes`` maps span keys to
    keyword-argument names of the wrapped function."""

    def _decorator(func):
        @wraps(func)
        def sync_wrapper(*args, **kwargs):
            # (returned, value) once the wrapped call has finished
            outcome = []
            try:
                return _trace_logic(func, attributes, outcome, *args, **kwargs)
            except _CallFailed as failure:
                raise failure.error
            except Exception as e:
                if outcome:
                    logging.warning(f"Telemetry bookkeeping failed after {func.__name__} ran: {e}")
                    returned, value = outcome[0]
                    if returned:
                        return value
                    raise value
                logging.warning(f"Telemetry wrapper failed: {e}. Executing function without telemetry.")
                return func(*args, **kwargs)

        return sync_wrapper

    return _decorator(attributes) if callable(attributes) else _decorator


class _CallFailed(Exception):
    """Carries an exception raised by the traced function itself."""

    def __init__(self, error: BaseException):
        super().__init__(str(error))
        self.error = error


def _trace_logic(func, attributes, outcome, *args, **kwargs):
    if trace_provider is None:
        raise RuntimeError("no trace provider")
    tracer = trace_provider.get_tracer(__name__)
    trace_name = f"function name: {func.__name__}"

    with tracer.start_as_current_span(trace_name) as span:
        try:
            span.set_attribute("function_name", func.__name__)
            if isinstance(attributes, dict):
                for key, arg in attributes.items():
                    if arg in kwargs:
                        span.set_attribute(key, _span_value(kwargs[arg]))
        except Exception as e:
            logging.warning(f"Failed to set span attributes: {e}")
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            outcome.append((False, e))
            span.record_exception(e)
            raise _CallFailed(e)
        outcome.append((True, result))
        try:
            if hasattr(result, "__len__"):
                span.set_attribute("result_size", len(result))
        except Exception as e:
            logging.warning(f"Failed to set span attributes: {e}")
        return result


def setupTelemetry():
    try:
        trace.set_tracer_provider(trace_provider)
        LoggingInstrumentor().instrument(set_logging_format=True)
    except Exception as e:
        logging.warning(f"Failed to set tracer provider: {e}")


def setupLogging(level=logging.INFO):
    setupTelemetry()

    class OpenTelemetryFilter(logging.Filter):
        def filter(self, record):
            span = trace.get_current_span()
            if span:
                context = span.get_span_context()
                record.otelTraceID = trace.format_trace_id(context.trace_id)
                record.otelSpanID = trace.format_span_id(context.span_id)
            else:
                record.otelTraceID = record.otelSpanID = None
            return True

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    if not root_logger.handlers:
        logging.basicConfig(level=level)
    for handler in root_logger.handlers:
        handler.addFilter(UselessLogFilter())
        handler.addFilter(OpenTelemetryFilter())
    logging.info("Telemetry and logging are set up")


__all__ = ["traceFunction", "setupLogging", "UselessLogFilter"]
