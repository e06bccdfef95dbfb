"""Small retrying JSON-over-HTTP helper shared by the remote providers."""

from __future__ import annotations

import time

import httpx


class TransportError(RuntimeError):
    """Remote call failed after bounded retries."""


def post_json(
    url: str,
    payload: dict,
    *,
    timeout: float = 30.0,
    retries: int = 3,
    backoff: float = 0.25,
    headers: dict[str, str] | None = None,
    client: httpx.Client | None = None,
) -> dict:
    """POST a JSON payload, retrying transient failures with exponential backoff.

    Retries cover transport errors and 5xx responses; 4xx responses fail
    immediately since retrying them cannot help.
    """
    last_error: Exception | None = None
    for attempt in range(retries):
        try:
            if client is not None:
                response = client.post(url, json=payload, headers=headers, timeout=timeout)
            else:
                with httpx.Client(timeout=timeout) as own:
                    response = own.post(url, json=payload, headers=headers)
            if response.status_code >= 500:
                raise TransportError(f"server error {response.status_code}: {response.text[:200]}")
            if response.status_code >= 400:
                raise TransportError(
                    f"request rejected ({response.status_code}): {response.text[:200]}"
                ) from None
            return response.json()
        except TransportError as exc:
            if "request rejected" in str(exc):
                raise
            last_error = exc
        except (httpx.TransportError, httpx.TimeoutException, ValueError) as exc:
            last_error = exc
        if attempt < retries - 1:
            time.sleep(backoff * (2**attempt))
    raise TransportError(f"POST {url} failed after {retries} attempts: {last_error}")
