/** DOM rendering for the problem board and the row action forms. */

import { ApiClient, ApiError } from "./api.js";
import { formatDuration, rowKey, type ProblemRow } from "./board.js";
import type { BoardView } from "./poller.js";

type ActionKind = "ack" | "downtime" | "recheck";

export class ConsoleUi {
	private board: HTMLElement;
	private banner: HTMLElement;
	private summary: HTMLElement;
	private openFormFor: string | null = null;
	private formErrors = new Map<string, string>();
	private lastView: BoardView | null = null;

	constructor(
		root: Document,
		private client: ApiClient,
		private requestRefresh: () => void,
	) {
		this.board = must(root.getElementById("board"));
		this.banner = must(root.getElementById("banner"));
		this.summary = must(root.getElementById("summary"));
	}

	render(view: BoardView): void {
		this.lastView = view;
		this.renderBanner(view);
		this.summary.textContent = view.everLoaded
			? view.rows.length === 0
				? "0 problems"
				: `${view.rows.length} problem${view.rows.length === 1 ? "" : "s"}`
			: "loading…";
		this.board.replaceChildren(
			...(view.rows.length === 0 && view.everLoaded
				? [emptyState()]
				: view.rows.map((row) => this.renderRow(row))),
		);
	}

	private renderBanner(view: BoardView): void {
		if (!view.stale) {
			this.banner.hidden = true;
			this.banner.textContent = "";
			return;
		}
		const since = view.lastSuccessAt
			? new Date(view.lastSuccessAt).toLocaleTimeString()
			: "never";
		this.banner.hidden = false;
		this.banner.textContent = `STALE — cannot reach the engine (${view.lastError ?? "error"}); last update ${since}`;
	}

	private renderRow(row: ProblemRow): HTMLElement {
		const key = rowKey(row);
		const div = document.createElement("div");
		div.className = `row sev-${row.status.toLowerCase()}`;
		div.dataset.key = key;

		const head = document.createElement("div");
		head.className = "row-head";
		head.append(
			span("status", row.status),
			span("name", row.service === null ? row.host : `${row.host} / ${row.service}`),
			span("meta", `${row.stateType} ${row.attempt}/${row.maxAttempts}`),
			span("meta", formatDuration(row.duration)),
		);
		if (row.acknowledged) head.append(badge("ack", "ACK"));
		if (row.inDowntime) head.append(badge("downtime", "DOWNTIME"));

		const actions = document.createElement("span");
		actions.className = "actions";
		for (const kind of ["ack", "downtime", "recheck"] as ActionKind[]) {
			const button = document.createElement("button");
			button.textContent = kind;
			button.addEventListener("click", () => this.toggleForm(key, kind));
			actions.append(button);
		}
		head.append(actions);
		div.append(head, span("output", row.lastOutput));

		if (this.openFormFor?.startsWith(`${key}|`)) {
			const kind = this.openFormFor.split("|")[1] as ActionKind;
			div.append(this.renderForm(row, kind));
		}
		return div;
	}

	private toggleForm(key: string, kind: ActionKind): void {
		const id = `${key}|${kind}`;
		this.openFormFor = this.openFormFor === id ? null : id;
		this.formErrors.delete(id);
		if (kind === "recheck" && this.openFormFor === id) {
			// no inputs needed: fire immediately
			this.openFormFor = null;
			void this.submit(key, kind, {});
			return;
		}
		this.rerender();
	}

	private renderForm(row: ProblemRow, kind: ActionKind): HTMLElement {
		const key = rowKey(row);
		const id = `${key}|${kind}`;
		const form = document.createElement("form");
		form.className = "action-form";
		const fields: Record<string, HTMLInputElement> = {};

		const add = (name: string, placeholder: string, type = "text") => {
			const input = document.createElement("input");
			input.name = name;
			input.placeholder = placeholder;
			input.type = type;
			fields[name] = input;
			form.append(input);
		};
		if (kind === "ack") {
			add("who", "your name");
			add("comment", "comment");
		} else {
			add("start", "start (epoch s or blank=now)");
			add("end", "end (epoch s)");
		}
		const submit = document.createElement("button");
		submit.type = "submit";
		submit.textContent = `send ${kind}`;
		form.append(submit);

		const error = this.formErrors.get(id);
		if (error) {
			const msg = document.createElement("span");
			msg.className = "form-error";
			msg.textContent = error;
			form.append(msg);
		}

		form.addEventListener("submit", (event) => {
			event.preventDefault();
			const values: Record<string, string> = {};
			for (const [name, input] of Object.entries(fields)) values[name] = input.value;
			void this.submit(key, kind, values, row);
		});
		return form;
	}

	private async submit(
		key: string,
		kind: ActionKind,
		values: Record<string, string>,
		row?: ProblemRow,
	): Promise<void> {
		const id = `${key}|${kind}`;
		const [host, service = null] = splitKey(key);
		try {
			if (kind === "ack") {
				await this.client.ack(host, service, values.who ?? "", values.comment ?? "");
			} else if (kind === "downtime") {
				const now = Date.now() / 1000;
				const start = values.start ? Number(values.start) : now;
				const end = Number(values.end);
				await this.client.downtime(host, service, start, end);
			} else {
				await this.client.forceCheck(host, service);
			}
			this.openFormFor = null;
			this.formErrors.delete(id);
			this.requestRefresh();
		} catch (err) {
			const message = err instanceof ApiError ? err.message : String(err);
			this.formErrors.set(id, message);
			this.openFormFor = id;
		}
		this.rerender();
	}

	private rerender(): void {
		if (this.lastView) this.render(this.lastView);
	}
}

function splitKey(key: string): [string, string | null] {
	const slash = key.indexOf("/");
	if (slash < 0) return [key, null];
	return [key.slice(0, slash), key.slice(slash + 1)];
}

function span(cls: string, text: string): HTMLElement {
	const el = document.createElement("span");
	el.className = cls;
	el.textContent = text;
	return el;
}

function badge(cls: string, text: string): HTMLElement {
	const el = span(`badge badge-${cls}`, text);
	return el;
}

function emptyState(): HTMLElement {
	const el = document.createElement("div");
	el.className = "empty";
	el.textContent = "0 problems — all quiet";
	return el;
}

function must<T>(value: T | null): T {
	if (value === null) throw new Error("console markup is missing an element");
	return value;
}
