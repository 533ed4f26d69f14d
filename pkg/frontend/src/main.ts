/** Console bootstrap: load config, start polling, wire the UI. */

import { ApiClient } from "./api.js";
import { loadConfig } from "./config.js";
import { PollController } from "./poller.js";
import { ConsoleUi } from "./ui.js";

async function boot(): Promise<void> {
	const config = await loadConfig();
	const client = new ApiClient(config.apiBase, config.token);
	const poller = new PollController(client, config.pollIntervalMs);
	const ui = new ConsoleUi(document, client, () => void poller.tick());
	poller.onChange((view) => ui.render(view));
	poller.start();
}

document.addEventListener("DOMContentLoaded", () => void boot());
