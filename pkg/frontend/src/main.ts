import { SessionApi } from "./api.js";
import { mount } from "./dom.js";
import { SessionStore } from "./store.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8743";

const store = new SessionStore(new SessionApi(baseUrl));
mount(document.getElementById("app") as HTMLElement, store);
void store.start();
