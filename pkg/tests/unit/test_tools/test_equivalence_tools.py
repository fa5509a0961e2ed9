"""Unit tests for certificate checking and neighbour search tools."""

import pytest

from tools.equivalence_tools import EquivParams, EquivTool, NeighborsParams, NeighborsTool
from conftest import assert_error_response, validate_json_response

ONES = [[1, 1], [1, 1]]
TWO = [[2]]
COLUMN = [[1], [1]]
ROW = [[1, 1]]
THERE_AND_BACK = [
    {"R": COLUMN, "S": ROW, "s": 1},
    {"R": COLUMN, "S": ROW, "s": -1},
]


@pytest.fixture
def equiv(compute_config):
    return EquivTool(compute_config)


class TestVerifyEsse:
    @pytest.mark.asyncio
    async def test_verified(self, equiv):
        params = EquivParams(action="verify-esse", a=ONES, b=TWO, r=COLUMN, s=ROW)
        doc = validate_json_response(await equiv.invoke(params))
        assert doc["verdict"] == "pass"
        assert doc["summary"] == ["ESSE over Zplus: verified"]

    @pytest.mark.asyncio
    async def test_wrong_target(self, equiv):
        params = EquivParams(action="verify-esse", a=ONES, b=[[3]], r=COLUMN, s=ROW)
        doc = validate_json_response(await equiv.invoke(params))
        assert doc["verdict"] == "fail"
        assert doc["data"]["detail"] == "B != SR"

    @pytest.mark.asyncio
    async def test_files(self, equiv, write_text):
        params = EquivParams(
            action="verify-esse",
            a_path=write_text("a.mat", "2 2\n1 1\n1 1\n"),
            b_path=write_text("b.mat", "1 1\n2\n"),
            r_path=write_text("r.mat", "2 1\n1\n1\n"),
            s_path=write_text("s.mat", "1 2\n1 1\n"),
        )
        doc = validate_json_response(await equiv.invoke(params))
        assert doc["verdict"] == "pass"

    @pytest.mark.asyncio
    async def test_shape_mismatch(self, equiv):
        params = EquivParams(action="verify-esse", a=ONES, b=TWO, r=COLUMN, s=COLUMN)
        assert_error_response(await equiv.invoke(params), "dimension_error", 2)

    @pytest.mark.asyncio
    async def test_missing_witness(self, equiv):
        params = EquivParams(action="verify-esse", a=ONES, b=TWO, r=COLUMN)
        error = assert_error_response(await equiv.invoke(params), "malformed_input")
        assert "S is required" in error["message"]


class TestChains:
    """verify-chain and compress."""

    @pytest.mark.asyncio
    async def test_there_and_back(self, equiv):
        doc = validate_json_response(
            await equiv.invoke(EquivParams(action="verify-chain", chain=THERE_AND_BACK))
        )
        assert doc["verdict"] == "pass"
        assert doc["summary"] == ["SSE chain over Zplus verified, lag 2"]

    @pytest.mark.asyncio
    async def test_broken_chain(self, equiv):
        chain = [{"R": COLUMN, "S": ROW}, {"R": COLUMN, "S": ROW}]
        doc = validate_json_response(
            await equiv.invoke(EquivParams(action="verify-chain", chain=chain))
        )
        assert doc["verdict"] == "fail"
        assert doc["summary"] == ["edge 1: edge source does not match the previous target"]

    @pytest.mark.asyncio
    async def test_declared_end(self, equiv):
        params = EquivParams(action="verify-chain", chain=THERE_AND_BACK, b=ONES)
        assert validate_json_response(await equiv.invoke(params))["verdict"] == "pass"
        params = EquivParams(action="verify-chain", chain=THERE_AND_BACK, b=TWO)
        doc = validate_json_response(await equiv.invoke(params))
        assert doc["verdict"] == "fail"
        assert doc["summary"] == ["edge 1: chain does not end at the declared matrix"]
        assert doc["data"]["target"] == ONES

    @pytest.mark.asyncio
    async def test_chain_over_z_reports_sgc2(self, equiv, write_json):
        path = write_json("chain.json", {"ring": "Z", "edges": [{"R": TWO, "S": [[1]]}]})
        doc = validate_json_response(
            await equiv.invoke(EquivParams(action="verify-chain", chain_path=path))
        )
        assert "sgc2 along the chain: 1" in doc["summary"]

    @pytest.mark.asyncio
    async def test_compress(self, equiv):
        doc = validate_json_response(
            await equiv.invoke(EquivParams(action="compress", chain=THERE_AND_BACK))
        )
        assert doc["verdict"] == "pass"
        assert doc["data"]["lag"] == 2
        assert doc["data"]["R"] == ONES
        assert doc["summary"] == ["shift equivalence of lag 2 over Zplus"]

    @pytest.mark.asyncio
    async def test_compress_broken_chain(self, equiv):
        chain = [{"R": COLUMN, "S": ROW}, {"R": COLUMN, "S": ROW}]
        response = await equiv.invoke(EquivParams(action="compress", chain=chain))
        error = assert_error_response(response, "verification_error", 1)
        assert error["index"] == 1

    @pytest.mark.asyncio
    async def test_chain_required(self, equiv):
        response = await equiv.invoke(EquivParams(action="verify-chain"))
        assert_error_response(response, "malformed_input")


class TestShiftEquivalence:
    @pytest.mark.asyncio
    async def test_verify_se(self, equiv):
        params = EquivParams(
            action="verify-se", a=ONES, b=ONES, witness={"R": ONES, "S": ONES, "lag": 2}
        )
        doc = validate_json_response(await equiv.invoke(params))
        assert doc["verdict"] == "pass"
        assert doc["summary"] == ["shift equivalence over Z of lag 2: verified"]

    @pytest.mark.asyncio
    async def test_failed_equation(self, equiv):
        params = EquivParams(
            action="verify-se",
            a=TWO,
            b=ONES,
            witness={"R": [[2, 0]], "S": [[1], [0]], "lag": 1},
        )
        doc = validate_json_response(await equiv.invoke(params))
        assert doc["verdict"] == "fail"
        assert doc["data"]["equation"] == "B^l = SR"

    @pytest.mark.asyncio
    async def test_maller_shub(self, equiv):
        doc = validate_json_response(
            await equiv.invoke(EquivParams(action="maller-shub", r=COLUMN, s=ROW))
        )
        assert doc["verdict"] == "pass"
        assert len(doc["data"]["U"]) == 3


class TestNeighborsTool:
    @pytest.mark.asyncio
    async def test_split(self, compute_config):
        tool = NeighborsTool(compute_config)
        doc = validate_json_response(
            await tool.invoke(NeighborsParams(matrix=TWO, max_inner=2, max_entry=1))
        )
        assert [nb["matrix"] for nb in doc["data"]["neighbors"]] == [ONES]
        assert doc["summary"][0] == "1 neighbours"

    @pytest.mark.asyncio
    async def test_with_sgc2(self, compute_config):
        tool = NeighborsTool(compute_config)
        params = NeighborsParams(matrix=TWO, max_inner=1, max_entry=2, with_sgc2=True)
        doc = validate_json_response(await tool.invoke(params))
        (item,) = doc["data"]["neighbors"]
        assert item["factorizations"] == 2
        assert "sgc2" in item

    @pytest.mark.asyncio
    async def test_budget_keeps_partial(self, compute_config):
        tool = NeighborsTool(compute_config)
        params = NeighborsParams(matrix=TWO, max_inner=2, max_entry=2, budget=3)
        response = await tool.invoke(params)
        error = assert_error_response(response, "budget_exceeded", 3)
        assert error["partial"] is True
        assert validate_json_response(response)["partial"] == [TWO]
