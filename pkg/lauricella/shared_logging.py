import json
import logging
import threading
from datetime import datetime, timezone
from typing import Any, Optional

import httpx

from lauricella.config import get_settings

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def configure_logging(level: Optional[str] = None):
    """Configure root logging for CLI and service entry points"""
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT)


def safe_serialize(data: Any):
    if data is None:
        return None
    try:
        if hasattr(data, 'model_dump'):
            return data.model_dump(mode="json")
        json.dumps(data)
        return data
    except (TypeError, ValueError):
        return str(data)


class RunLogger:
    """One log record per analysis run, optionally forwarded to a collector."""

    def __init__(self, component: str, collector_url: Optional[str] = None):
        self.component = component
        self.collector_url = collector_url if collector_url is not None else get_settings().log_url
        self.logger = logging.getLogger(f"lauricella.{component}")

    def _send_log_async(self, log_data: dict):
        """Send log in a daemon thread so analysis never blocks on the collector"""
        def send_log():
            try:
                with httpx.Client(timeout=5.0) as client:
                    response = client.post(f"{self.collector_url}/logs", json=log_data)
                    if response.status_code != 200:
                        self.logger.warning(f"Failed to send log to collector: {response.status_code}")
            except Exception as e:
                self.logger.warning(f"Error sending log to collector: {str(e)}")

        thread = threading.Thread(target=send_log)
        thread.daemon = True
        thread.start()

    def log_run(
        self,
        operation: str,
        status: str,
        parameters: Optional[Any] = None,
        result: Optional[Any] = None,
        error_message: Optional[str] = None,
        execution_time_ms: Optional[float] = None
    ) -> dict:
        log_data = {
            "component": self.component,
            "operation": operation,
            "status": status,
            "parameters": safe_serialize(parameters),
            "result": safe_serialize(result),
            "error_message": error_message,
            "execution_time_ms": execution_time_ms,
            "timestamp": datetime.now(timezone.utc).isoformat()
        }

        message = f"[{self.component}] {operation} - Status: {status}"
        if execution_time_ms is not None:
            message += f" - Time: {execution_time_ms:.2f}ms"
        if error_message:
            message += f" - Error: {error_message}"

        if status == "ok":
            self.logger.info(message)
        else:
            self.logger.error(message)

        if self.collector_url:
            self._send_log_async(log_data)
        return log_data
