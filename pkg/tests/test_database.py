import asyncio

from qsd_engine.database import RunStore


def test_run_store_lifecycle(tmp_path):
    store = RunStore(str(tmp_path / "runs.db"))

    async def scenario():
        first = await store.store_run("solve", {"eigenvalue": -1.6, "dim": 2})
        second = await store.store_run("ramps", {"dim": 1, "ramps_subspace_dim": 3})
        assert second > first

        run = await store.get_run(first)
        assert run["command"] == "solve"
        assert run["report"] == {"eigenvalue": -1.6, "dim": 2}
        assert run["created_at"]

        assert [r["id"] for r in await store.list_runs()] == [second, first]
        assert [r["id"] for r in await store.list_runs("ramps")] == [second]

        assert await store.delete_run(first)
        assert not await store.delete_run(first)
        assert await store.get_run(first) is None

    asyncio.run(scenario())


def test_run_store_persists_across_instances(tmp_path):
    path = str(tmp_path / "runs.db")
    run_id = asyncio.run(RunStore(path).store_run("build", {"dim": 4}))
    assert asyncio.run(RunStore(path).get_run(run_id))["report"] == {"dim": 4}
