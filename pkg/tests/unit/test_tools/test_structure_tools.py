"""Unit tests for the structure and invariant report tools."""

import pytest

from tools.invariant_tools import (
    Classify2x2Params,
    Classify2x2Tool,
    InvariantReportParams,
    InvariantReportTool,
)
from tools.structure_tools import StructureParams, StructureTool
from conftest import assert_error_response, summary_text, validate_json_response

REDUCIBLE = [[1, 1, 1], [1, 1, 1], [0, 0, 0]]


class TestInvariantReportTool:
    def test_tool_metadata(self, compute_config):
        tool = InvariantReportTool(compute_config)
        assert tool.name == "invariants_report"
        assert "bowen-franks" in tool.description.lower()
        assert tool.Params == InvariantReportParams

    @pytest.mark.asyncio
    async def test_report_from_file(self, compute_config, nonplussed, write_matrix):
        tool = InvariantReportTool(compute_config)
        path = write_matrix("nonplussed.mat", nonplussed)
        doc = validate_json_response(
            await tool.invoke(InvariantReportParams(matrix_path=path, count=4))
        )
        assert doc["tool"] == "invariants_report"
        assert doc["verdict"] == "info"
        text = summary_text(doc)
        assert "det(I-tA) = (1 - 2t)(1 - t)" in text
        assert "traces: 3, 5, 9, 17" in text

    @pytest.mark.asyncio
    async def test_zeta_check(self, compute_config, golden_mean):
        tool = InvariantReportTool(compute_config)
        params = InvariantReportParams(matrix=golden_mean.to_rows(), zeta_check=True)
        doc = validate_json_response(await tool.invoke(params))
        assert doc["verdict"] == "pass"
        assert doc["data"]["zeta_identity"] == {"order": 10, "ok": True}

    @pytest.mark.asyncio
    async def test_inline_and_file_conflict(self, compute_config, golden_mean, write_matrix):
        tool = InvariantReportTool(compute_config)
        params = InvariantReportParams(
            matrix=golden_mean.to_rows(), matrix_path=write_matrix("g.mat", golden_mean)
        )
        error = assert_error_response(await tool.invoke(params), "malformed_input", 2)
        assert "not both" in error["message"]

    @pytest.mark.asyncio
    async def test_missing_file(self, compute_config, tmp_path):
        tool = InvariantReportTool(compute_config)
        params = InvariantReportParams(matrix_path=str(tmp_path / "absent.mat"))
        assert_error_response(await tool.invoke(params), "malformed_input", 2)

    @pytest.mark.asyncio
    async def test_malformed_file_location(self, compute_config, write_text):
        tool = InvariantReportTool(compute_config)
        path = write_text("bad.mat", "2 2\n1 1\n1 x\n")
        error = assert_error_response(
            await tool.invoke(InvariantReportParams(matrix_path=path)), "malformed_input"
        )
        assert (error["line"], error["column"]) == (3, 3)


class TestClassify2x2Tool:
    """The triangular family [[a, x], [0, b]]."""

    @pytest.mark.asyncio
    async def test_counts_by_default(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        doc = validate_json_response(await tool.invoke(Classify2x2Params(a=6, b=1)))
        assert doc["verdict"] == "info"
        assert doc["data"]["counts"] == {"sim": 3, "se": 2}
        assert "SIM classes: 3, SE classes: 2" in doc["summary"]

    @pytest.mark.asyncio
    async def test_classes(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        doc = validate_json_response(
            await tool.invoke(Classify2x2Params(a=6, b=1, classes=True))
        )
        assert "SIM classes: {0} {1, 4} {2, 3}" in doc["summary"]
        assert "SE classes: {0} {1, 2, 3, 4}" in doc["summary"]

    @pytest.mark.asyncio
    async def test_similar_pair(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        doc = validate_json_response(
            await tool.invoke(Classify2x2Params(a=6, b=1, x=1, y=4))
        )
        assert doc["verdict"] == "pass"
        assert doc["data"]["pair"] == {"x": 1, "y": 4, "sim": True, "se": True}

    @pytest.mark.asyncio
    async def test_inequivalent_pair(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        doc = validate_json_response(
            await tool.invoke(Classify2x2Params(a=6, b=1, x=0, y=1))
        )
        assert doc["verdict"] == "fail"
        assert "M_0 ~SE-Z M_1: no" in doc["summary"]

    @pytest.mark.asyncio
    async def test_oracle_agrees(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        params = Classify2x2Params(a=6, b=2, x=1, y=3, oracle_bound=1)
        doc = validate_json_response(await tool.invoke(params))
        assert doc["data"]["oracle"]["witness"] is not None
        assert doc["data"]["oracle"]["agrees"]

    @pytest.mark.asyncio
    async def test_transpose(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        doc = validate_json_response(
            await tool.invoke(Classify2x2Params(a=256, b=1, x=7, transpose=True))
        )
        assert doc["verdict"] == "fail"
        assert doc["data"]["transpose"] == {"partner": 73, "se": False}

    @pytest.mark.asyncio
    async def test_transpose_not_invertible(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        response = await tool.invoke(Classify2x2Params(a=256, b=1, x=0, transpose=True))
        assert_error_response(response, "inapplicable")

    @pytest.mark.asyncio
    async def test_bad_family(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        assert_error_response(await tool.invoke(Classify2x2Params(a=2, b=2)), "domain_error")

    @pytest.mark.asyncio
    async def test_reduce_given_matrix(self, compute_config):
        tool = Classify2x2Tool(compute_config)
        params = Classify2x2Params(a=6, b=1, matrix=[[6, 4], [0, 1]])
        doc = validate_json_response(await tool.invoke(params))
        assert doc["data"]["reduction"]["x"] == 1


class TestStructureTool:
    @pytest.mark.asyncio
    async def test_core(self, compute_config):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="core", matrix=[[2, 0], [1, 0]]))
        )
        assert doc["summary"] == ["kept vertices: 0", "core size: 1"]
        assert doc["data"]["core"]["entries"] == [[2]]

    @pytest.mark.asyncio
    async def test_primitive(self, compute_config, golden_mean):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="primitive", matrix=golden_mean.to_rows()))
        )
        assert doc["verdict"] == "pass"
        assert doc["summary"] == ["primitive: yes (A^2 > 0)"]

    @pytest.mark.asyncio
    async def test_not_primitive(self, compute_config, cycle_c):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="primitive", matrix=cycle_c.to_rows()))
        )
        assert doc["verdict"] == "fail"
        assert doc["summary"] == ["primitive: no (irreducible of period 3)"]

    @pytest.mark.asyncio
    async def test_period(self, compute_config, cycle_d):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="period", matrix=cycle_d.to_rows()))
        )
        assert doc["data"] == {"irreducible": True, "period": 2}

    @pytest.mark.asyncio
    async def test_period_of_reducible(self, compute_config):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="period", matrix=REDUCIBLE))
        )
        assert doc["verdict"] == "fail"
        assert doc["summary"] == ["reducible"]

    @pytest.mark.asyncio
    async def test_blockform(self, compute_config, cycle_d):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="blockform", matrix=cycle_d.to_rows()))
        )
        assert doc["data"]["class_sizes"] == [2, 1]
        assert doc["data"]["products"] == [[[1, 1], [1, 1]], [[2]]]
        assert "block product 0: primitive" in doc["summary"]

    @pytest.mark.asyncio
    async def test_blockform_reducible(self, compute_config):
        tool = StructureTool(compute_config)
        response = await tool.invoke(StructureParams(action="blockform", matrix=REDUCIBLE))
        assert_error_response(response, "not_irreducible", 2)

    @pytest.mark.asyncio
    async def test_components(self, compute_config):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="components", matrix=REDUCIBLE))
        )
        assert doc["summary"] == ["{0, 1}: irreducible, period 1", "{2}: trivial"]

    @pytest.mark.asyncio
    async def test_periodic(self, compute_config):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="periodic", matrix=[[2]], count=4))
        )
        assert doc["summary"][0] == "fixed points: 2, 4, 8, 16"
        assert doc["summary"][1] == "least period points: 2, 2, 6, 12"

    @pytest.mark.asyncio
    async def test_higher(self, compute_config):
        tool = StructureTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(StructureParams(action="higher", matrix=[[2]], k=2))
        )
        assert doc["verdict"] == "info"
        assert doc["data"]["k"] == 2

    @pytest.mark.asyncio
    async def test_negative_entries(self, compute_config):
        tool = StructureTool(compute_config)
        response = await tool.invoke(StructureParams(action="core", matrix=[[1, -1], [0, 1]]))
        assert_error_response(response, "domain_error")
