package com.fixture.util;

/**
 * Padding helpers with intentionally same-arity overloads.
 */
public class Formatter {
    public String pad(String s) {
        return " " + s + " ";
    }

    public String pad(int width) {
        String out = "";
        for (int i = 0; i < width; i++) {
            out = out + " ";
        }
        return out;
    }
}
