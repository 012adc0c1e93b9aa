// Fixed colour scales, chosen once. The descriptions are the contract:
// share/unfairness panels run green (low) to red (high), cost panels run
// yellow (low) to black (high), and threshold colouring runs blue to orange.

export const GREEN_TO_RED = ["#1a9850", "#fee08b", "#d73027"];
export const YELLOW_TO_BLACK = ["#ffeda0", "#b26a00", "#000000"];
export const THRESHOLD_SCALE = ["#2166ac", "#67a9cf", "#f4a582", "#e66101"];

export const FRONT_HIGHLIGHT = "#d7301f";
export const BAR_PALETTE: Record<string, string> = {
    pop: "#66c2a5",
    neb: "#fc8d62",
    "ni-deg": "#8da0cb",
    "ni-eig": "#e78ac3",
};
