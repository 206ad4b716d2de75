package com.fixture.xml;

/**
 * Toy XML element builder.
 */
public class Xml {
    private String name;
    private String attributes;

    public Xml(String name) {
        this.name = name;
        this.attributes = "";
    }

    public void setAttribute(String key, String value) {
        attributes = attributes + " " + key + "=\"" + value + "\"";
    }

    public String render() {
        return "<" + name + attributes + "/>";
    }
}
