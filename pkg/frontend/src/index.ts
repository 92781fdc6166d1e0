export * from "./protocol.js";
export * from "./framing.js";
export * from "./client.js";
export * from "./words.js";
export * from "./actions.js";
export * from "./viewmodel.js";
export * from "./transcript.js";
export * from "./console.js";
