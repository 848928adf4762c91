"""Thin client over the service API.

Without a base URL, requests are handled in-process by the same functions the
HTTP endpoints call; with one, they are POSTed to a running server. Error
responses are mapped back onto the package's exception types so callers handle
local and remote failures identically.
"""

from __future__ import annotations

import httpx

from ..errors import DataError, NumericalError
from . import api, schemas


class ServiceClient:
    def __init__(self, base_url: str | None = None, timeout: float = 300.0):
        self.base_url = base_url.rstrip("/") if base_url else None
        self.timeout = timeout

    def _post(self, path: str, request, response_model):
        assert self.base_url is not None
        try:
            resp = httpx.post(
                f"{self.base_url}{path}",
                json=request.model_dump(mode="json"),
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise NumericalError(f"server request failed: {exc}") from None
        if resp.status_code >= 500:
            raise NumericalError(f"server error {resp.status_code}: {resp.text}")
        if resp.status_code >= 400:
            raise DataError(f"server rejected request ({resp.status_code}): {resp.text}")
        return response_model.model_validate(resp.json())

    def synth(self, request: schemas.SynthRequest) -> schemas.SynthResponse:
        if self.base_url is None:
            return api.run_synth(request)
        return self._post("/synth", request, schemas.SynthResponse)

    def segment(self, request: schemas.SegmentRequest) -> schemas.SegmentResponse:
        if self.base_url is None:
            return api.run_segment(request)
        return self._post("/segment", request, schemas.SegmentResponse)

    def summarize(self, request: schemas.SummarizeRequest) -> schemas.SummarizeResponse:
        if self.base_url is None:
            return api.run_summarize(request)
        return self._post("/summarize", request, schemas.SummarizeResponse)

    def evaluate(self, request: schemas.EvaluateRequest) -> schemas.MetricsPayload:
        if self.base_url is None:
            return api.run_evaluate(request)
        return self._post("/evaluate", request, schemas.MetricsPayload)
