import sqlite3
import json
import asyncio
import logging
from typing import List, Dict, Any, Optional

logger = logging.getLogger(__name__)


class RunStore:
    """History of solve/ramps runs, one JSON report per row"""

    def __init__(self, db_path: str = "qsd_runs.db"):
        self.db_path = db_path
        self.init_database()

    def init_database(self):
        """Initialize the database with required tables"""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        cursor.execute('''
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT NOT NULL,
                report_json TEXT NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        ''')

        conn.commit()
        conn.close()

    @staticmethod
    def _row_to_dict(row) -> Dict[str, Any]:
        return {
            'id': row[0],
            'command': row[1],
            'report': json.loads(row[2]),
            'created_at': row[3],
        }

    async def store_run(self, command: str, report: Dict[str, Any]) -> int:
        """Store a run report and return its id"""
        def _store():
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('''
                INSERT INTO runs (command, report_json)
                VALUES (?, ?)
            ''', (command, json.dumps(report)))
            run_id = cursor.lastrowid
            conn.commit()
            conn.close()
            return run_id

        run_id = await asyncio.get_event_loop().run_in_executor(None, _store)
        logger.debug("stored %s run %d", command, run_id)
        return run_id

    async def get_run(self, run_id: int) -> Optional[Dict[str, Any]]:
        """Get a run by id"""
        def _get():
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('''
                SELECT id, command, report_json, created_at
                FROM runs
                WHERE id = ?
            ''', (run_id,))
            result = cursor.fetchone()
            conn.close()
            return self._row_to_dict(result) if result else None

        return await asyncio.get_event_loop().run_in_executor(None, _get)

    async def list_runs(self, command: Optional[str] = None) -> List[Dict[str, Any]]:
        """List runs, newest first, optionally for one command"""
        def _list():
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            if command is None:
                cursor.execute('''
                    SELECT id, command, report_json, created_at
                    FROM runs
                    ORDER BY id DESC
                ''')
            else:
                cursor.execute('''
                    SELECT id, command, report_json, created_at
                    FROM runs
                    WHERE command = ?
                    ORDER BY id DESC
                ''', (command,))
            results = cursor.fetchall()
            conn.close()
            return [self._row_to_dict(row) for row in results]

        return await asyncio.get_event_loop().run_in_executor(None, _list)

    async def delete_run(self, run_id: int) -> bool:
        """Delete a run; False when it did not exist"""
        def _delete():
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('DELETE FROM runs WHERE id = ?', (run_id,))
            deleted = cursor.rowcount > 0
            conn.commit()
            conn.close()
            return deleted

        return await asyncio.get_event_loop().run_in_executor(None, _delete)
