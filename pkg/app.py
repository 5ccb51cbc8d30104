import logging

from flask import Flask, jsonify, request

from hahn_field import __version__
from hahn_field.src.chain import DEFAULT_WINDOW, Chain
from hahn_field.src.config import resolve_seed
from hahn_field.src.couple import couple_from_shift
from hahn_field.src.derivation import DerivationConfig
from hahn_field.src.errors import CheckFailure, HahnFieldError
from hahn_field.src.grammar import (
    chain_from_dict,
    couple_from_dict,
    parse_group_element,
    parse_labels,
    parse_point,
    parse_series,
    parse_window,
)
from hahn_field.src.ranks import psi_rank, unfolded_rank
from hahn_field.src.realization import RealizationSpec, realize
from hahn_field.src.reports import with_schema

logger = logging.getLogger(__name__)

app = Flask(__name__)


class BadRequest(HahnFieldError, ValueError):
    """The request body is missing or lacks a required field."""


def _body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise BadRequest("expected a JSON object body")
    return data


def _field(data: dict, name: str):
    if name not in data:
        raise BadRequest(f"missing field {name!r}")
    return data[name]


def _labels(value) -> list:
    if isinstance(value, str):
        return parse_labels(value)
    if isinstance(value, list):
        return [str(label) for label in value]
    raise BadRequest("labels must be a list or a comma-separated string")


def _window(data: dict):
    return parse_window(str(data.get("window", str(DEFAULT_WINDOW))))


def _couple(data: dict):
    if "couple" not in data:
        return couple_from_shift(Chain.product(["q1"]))
    return couple_from_dict(data["couple"])


@app.errorhandler(CheckFailure)
def check_failed(error: CheckFailure):
    return jsonify(with_schema({"error": str(error), "report": error.report})), 422


@app.errorhandler(HahnFieldError)
def bad_input(error: HahnFieldError):
    return jsonify(with_schema({"error": str(error)})), 400


@app.errorhandler(ValueError)
def bad_value(error: ValueError):
    return jsonify(with_schema({"error": str(error)})), 400


@app.route("/api/health", methods=["GET"])
def health():
    return jsonify(with_schema({"status": "ok", "version": __version__}))


@app.route("/api/realize", methods=["POST"])
def realize_route():
    data = _body()
    spec = RealizationSpec.from_labels(_labels(_field(data, "q")), data.get("p"))
    seed = resolve_seed(data.get("seed"))
    certificate = realize(spec, _window(data), seed, data.get("samples"))
    return jsonify(certificate.to_dict())


@app.route("/api/rank", methods=["POST"])
def rank_route():
    data = _body()
    couple = _couple(data)
    window = _window(data)
    report = psi_rank(couple, window, certify=True)
    payload = {"couple": couple.to_dict(), "rank": report.to_dict()}
    if data.get("unfolded", False):
        unfolded = unfolded_rank(couple, window)
        suite = unfolded.verify(couple)
        if not suite.passed:
            raise CheckFailure("unfolded rank structure failed", report=suite.to_dict())
        payload["unfolded_rank"] = unfolded.to_dict()
    return jsonify(with_schema(payload))


@app.route("/api/qo", methods=["POST"])
def qo_route():
    data = _body()
    if "chain" in data:
        chain = chain_from_dict(data["chain"])
    else:
        chain = Chain.product(_labels(_field(data, "q")))
    a = parse_point(str(_field(data, "a")), chain)
    b = parse_point(str(_field(data, "b")), chain)
    verdict = chain.qo_verdict(a, b)
    return jsonify(with_schema({"a": str(a), "b": str(b), "result": verdict}))


@app.route("/api/derive", methods=["POST"])
def derive_route():
    data = _body()
    couple = _couple(data)
    derivation = DerivationConfig(couple)
    a = parse_series(str(_field(data, "series")), couple.chain)
    payload = {"series": a.to_dict(), "derivative": derivation.derive(a).to_dict()}
    if "log_bound" in data:
        bound = parse_group_element(str(data["log_bound"]), couple.chain)
        payload["log_derivative"] = derivation.log_derivative(a, bound).to_dict()
    return jsonify(with_schema(payload))


if __name__ == "__main__":
    app.run(debug=True)
