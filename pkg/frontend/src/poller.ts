/** Poll loop: fetch the problem board on an interval, never blank it.
 *
 * One request in flight at a time (a slow poll skips ticks instead of
 * stacking).  Failures keep the last known board and raise a stale banner
 * with the last-success time; retries back off up to four intervals and
 * reset on the first success.
 */

import type { ApiClient } from "./api.js";
import { buildBoard, type ProblemRow } from "./board.js";

export interface BoardView {
	rows: ProblemRow[];
	stale: boolean;
	lastSuccessAt: number | null;
	lastError: string | null;
	everLoaded: boolean;
}

export class PollController {
	view: BoardView = {
		rows: [],
		stale: false,
		lastSuccessAt: null,
		lastError: null,
		everLoaded: false,
	};
	private inFlight = false;
	private failures = 0;
	private listeners: Array<(view: BoardView) => void> = [];

	constructor(
		private client: ApiClient,
		private intervalMs: number,
		private clock: () => number = () => Date.now(),
	) {}

	onChange(listener: (view: BoardView) => void): void {
		this.listeners.push(listener);
	}

	/** Milliseconds until the next poll is due, honoring backoff. */
	nextDelay(): number {
		const factor = Math.min(2 ** this.failures, 4);
		return this.intervalMs * factor;
	}

	async tick(): Promise<void> {
		if (this.inFlight) return;
		this.inFlight = true;
		try {
			const doc = await this.client.problemStatus();
			this.view = {
				rows: buildBoard(doc),
				stale: false,
				lastSuccessAt: this.clock(),
				lastError: null,
				everLoaded: true,
			};
			this.failures = 0;
		} catch (err) {
			this.failures += 1;
			this.view = {
				...this.view,
				stale: true,
				lastError: err instanceof Error ? err.message : String(err),
			};
		} finally {
			this.inFlight = false;
		}
		for (const listener of this.listeners) listener(this.view);
	}

	start(setTimer: (fn: () => void, ms: number) => unknown = setTimeout): void {
		const loop = async () => {
			await this.tick();
			setTimer(loop, this.nextDelay());
		};
		void loop();
	}
}
